"""Parameter chain of the reduction phase as exact integer arithmetic."""

from __future__ import annotations

from dataclasses import dataclass

from .graph import DomainError


def block_count_d(k: int) -> int:
    """``d = (k+1)((k+1)^2 - 1)``."""
    return (k + 1) * ((k + 1) ** 2 - 1)


def zone_count_z(k: int) -> int:
    """``z = 7k + k(k+1)^2 + kd + 1``."""
    return 7 * k + k * (k + 1) ** 2 + k * block_count_d(k) + 1


def q_for(k: int) -> int:
    """Smallest ``q`` with ``3q(q-1) + 1 >= z``."""
    z = zone_count_z(k)
    q = 1
    while 3 * q * (q - 1) + 1 < z:
        q += 1
    return q


def radius_for_q(q: int, k: int) -> int:
    """``(q-1)(4k+9) + (2k+5)``: radius holding ``3q(q-1)+1`` zones of radius ``2k+5``."""
    if q < 1 or k < 0:
        raise DomainError("need q >= 1 and k >= 0")
    return (q - 1) * (4 * k + 9) + (2 * k + 5)


def radius_for(k: int) -> int:
    return radius_for_q(q_for(k), k)


def largest_q_fitting(num_vertices: int, k: int) -> int | None:
    """Largest ``q`` whose grid ``H_{r(q)}`` has at most ``num_vertices`` vertices."""
    if 6 * radius_for_q(1, k) ** 2 > num_vertices:
        return None
    q = 1
    while 6 * radius_for_q(q + 1, k) ** 2 <= num_vertices:
        q += 1
    return q


@dataclass(frozen=True)
class Constants:
    """Zone parameters for one run.

    ``paper`` uses the full ``q`` needed for ``z`` zones; ``reduced`` keeps
    the zone shape H_{2k+5} but accepts any ``q``.
    """

    k: int
    q: int
    mode: str = "paper"

    @classmethod
    def paper(cls, k: int) -> Constants:
        if k < 2:
            raise DomainError("zone constants are defined for k >= 2")
        return cls(k, q_for(k), "paper")

    @classmethod
    def reduced(cls, k: int, q: int) -> Constants:
        if k < 1 or q < 1:
            raise DomainError("reduced constants need k >= 1 and q >= 1")
        return cls(k, q, "reduced")

    @property
    def radius(self) -> int:
        return radius_for_q(self.q, self.k)

    @property
    def zone_radius(self) -> int:
        return 2 * self.k + 5

    @property
    def block_radius(self) -> int:
        return self.k + 3

    @property
    def zones(self) -> int:
        return 3 * self.q * (self.q - 1) + 1

    @property
    def trusted(self) -> bool:
        """Whether the zone count meets ``z``, so the counting arguments apply."""
        return self.mode == "paper" and self.zones >= zone_count_z(self.k)
