"""Reduced eta invariants in the adiabatic limit and their polynomial lifts.

The reduced eta invariant of the twisted Dirac operator equals, in the
adiabatic limit, sign(d)^r * sum over discriminant classes of
(1/2 - qbar_d(rho)) mod Z. The twist dependence of the class sum S(d)
admits a polynomial description a*d^(r+1) + b*d^r + c*d^(r-1) mod Z;
closed forms for the coefficients are certified here against the
enumerated sums, which remain the reference throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ._parallel import parallel_map
from .errors import CertificationFailure, DomainError, FitFailure, RankMismatch
from .lattice import EvenLattice, discriminant_sum_fraction, smith_normal_form
from .qmodz import QmodZ


def discriminant_sum(lattice: EvenLattice, d: int, cap: int | None = None) -> QmodZ:
    """S(d): sum of the discriminant quadratic form over all classes, mod Z."""
    total, _ = discriminant_sum_fraction(lattice, d, cap)
    return QmodZ.of(total)


def eta_adiabatic(lattice: EvenLattice, d: int, cap: int | None = None) -> QmodZ:
    """Adiabatic reduced eta invariant of the Dirac operator twisted by power d."""
    total, order = discriminant_sum_fraction(lattice, d, cap)
    sgn = -1 if (d < 0 and lattice.rank % 2) else 1
    return QmodZ.of(sgn * (Fraction(order, 2) - total))


def hurwitz_zeta_at_zero(x: Fraction) -> Fraction:
    """zeta(0, x) = 1/2 - x for 0 < x <= 1."""
    x = Fraction(x)
    if not 0 < x <= 1:
        raise DomainError(f"zeta(0, x) requires 0 < x <= 1, got {x}")
    return Fraction(1, 2) - x


@dataclass(frozen=True)
class PolynomialLift:
    """Residues (a, b, c) with S(d) = a*d^(r+1) + b*d^r + c*d^(r-1) mod Z for d >= 1.

    alpha_closed_form carries the exact rank-2 rational before reduction;
    only the residue classes are meaningful downstream.
    """

    rank: int
    alpha: QmodZ
    beta: QmodZ
    gamma: QmodZ
    certified_range: int
    alpha_closed_form: Fraction | None = None

    def predict(self, d: int) -> QmodZ:
        """Evaluate the lift at a nonzero twist; odd/even degree bookkeeping
        extends the certified positive range to negative d via S(-d) = -S(d)."""
        if d == 0:
            raise ValueError("twist must be nonzero")
        if d < 0:
            return -self.predict(-d)
        r = self.rank
        return (
            self.alpha.scale(d ** (r + 1))
            + self.beta.scale(d**r)
            + self.gamma.scale(d ** (r - 1))
        )

    def as_report(self) -> dict:
        return {
            "alpha": str(self.alpha.value),
            "beta": str(self.beta.value),
            "gamma": str(self.gamma.value),
            "certified_to": self.certified_range,
        }


def _certify(
    lattice: EvenLattice,
    lift: PolynomialLift,
    d_range: int,
    cap: int | None,
    jobs: int,
) -> None:
    sums = parallel_map(lambda d: discriminant_sum(lattice, d, cap), range(1, d_range + 1), jobs)
    for d, s in zip(range(1, d_range + 1), sums):
        if lift.predict(d) != s:
            raise CertificationFailure(
                f"lift disagrees with enumerated sum at d={d}: "
                f"predicted {lift.predict(d)}, enumerated {s}"
            )


def rank2_lift(
    lattice: EvenLattice, cap: int | None = None, jobs: int = 1
) -> PolynomialLift:
    """Closed-form lift for rank-2 lattices: S(d) = a'*d^3 + (|dis|/4)*d mod Z.

    a' is assembled from the Smith basis columns t_1, t_2 of the Gram matrix
    (the degree-2 part folds into the odd degrees because its coefficient is
    half-integral and d^2 = d mod 2). Certified against enumeration for
    d = 1..12; disagreement means an implementation bug, not bad input.
    """
    if lattice.rank != 2:
        raise RankMismatch(f"rank-2 closed form requested for rank {lattice.rank}")
    snf = smith_normal_form(lattice.gram)
    d1, d2 = snf.diag
    t1 = [Fraction(snf.t[i][0]) for i in range(2)]
    t2 = [Fraction(snf.t[i][1]) for i in range(2)]
    q1 = lattice.quadratic(t1)
    q2 = lattice.quadratic(t2)
    bt = lattice.bilinear(t1, t2)
    disc = lattice.det

    cubic = Fraction(d1 * d2, 3) * (q1 + q2) + Fraction(d1 * d2, 4) * bt
    quadratic = Fraction(d2 * q1 + d1 * q2, 2) + Fraction(d1 + d2, 4) * bt
    linear = (Fraction(d2, d1) * q1 + Fraction(d1, d2) * q2) / 6 + bt / 4
    # quadratic is half-integral, so its d^2 term folds into the odd powers:
    # S(d) = a'*d^3 + (|dis|/4)*d mod Z with a' as below
    alpha_prime = cubic + quadratic + linear - Fraction(disc, 4)
    if (12 * alpha_prime).denominator != 1:
        raise CertificationFailure(f"12*alpha'={12 * alpha_prime} is not integral")

    lift = PolynomialLift(
        rank=2,
        alpha=QmodZ.of(alpha_prime),
        beta=QmodZ.of(0),
        gamma=QmodZ.of(Fraction(disc, 4)),
        certified_range=12,
        alpha_closed_form=alpha_prime,
    )
    _certify(lattice, lift, 12, cap, jobs)
    return lift


def general_lift(
    lattice: EvenLattice, d_max: int, cap: int | None = None, jobs: int = 1
) -> PolynomialLift:
    """Fit residues (a, b, c) to the enumerated S(d) for d = 1..d_max.

    b and c are searched over their finite admissible sets (2b and 12c are
    integers); a is then forced by the d=1 congruence and must have
    denominator dividing 12*det. The first candidate surviving the full
    range wins, so the result is deterministic.
    """
    if d_max < 6:
        raise DomainError(f"d_max must be at least 6, got {d_max}")
    r = lattice.rank
    sums = parallel_map(
        lambda d: discriminant_sum(lattice, d, cap), range(1, d_max + 1), jobs
    )
    alpha_denom_cap = 12 * lattice.det
    best_progress = -1
    best_fail_d = 1
    for beta_num in range(2):
        for gamma_num in range(12):
            beta = QmodZ.of(Fraction(beta_num, 2))
            gamma = QmodZ.of(Fraction(gamma_num, 12))
            alpha = QmodZ.of(sums[0].value - beta.value - gamma.value)
            if alpha_denom_cap % alpha.value.denominator:
                continue
            lift = PolynomialLift(
                rank=r, alpha=alpha, beta=beta, gamma=gamma, certified_range=d_max
            )
            failed_at = next(
                (d for d in range(2, d_max + 1) if lift.predict(d) != sums[d - 1]),
                None,
            )
            if failed_at is None:
                return lift
            if failed_at > best_progress:
                best_progress = failed_at
                best_fail_d = failed_at
    raise FitFailure(
        f"no admissible residue triple matches S(d) on 1..{d_max}; "
        f"best candidate first disagreed at d={best_fail_d}",
        offending_d=best_fail_d,
    )
