import cmath
import math
import random
from fractions import Fraction

import pytest

from nileta.errors import (
    NotEvenDiagonal,
    NotInDual,
    NotPositiveDefinite,
    NotSymmetric,
    OrderOverflow,
    Singular,
)
from nileta.lattice import (
    DEFAULT_ENUM_CAP,
    RescaledLattice,
    discriminant_group,
    dual_gram_inverse,
    qbar,
    smith_normal_form,
    validate_even_lattice,
)
from nileta.qmodz import QmodZ

from .oracles import invariant_factors_from_minors

A1 = [[2]]
A2 = [[2, 1], [1, 2]]
TWO_A1 = [[2, 0], [0, 2]]


def test_validate_a2():
    lat = validate_even_lattice(A2)
    assert lat.rank == 2
    assert lat.det == 3


def test_validate_diagonal():
    assert validate_even_lattice(TWO_A1).det == 4


def test_validate_odd_diagonal():
    with pytest.raises(NotEvenDiagonal) as exc:
        validate_even_lattice([[1, 0], [0, 2]])
    assert exc.value.index == 0


def test_validate_not_symmetric():
    with pytest.raises(NotSymmetric) as exc:
        validate_even_lattice([[2, 1], [0, 2]])
    assert exc.value.index == (0, 1)


def test_validate_not_positive_definite():
    with pytest.raises(NotPositiveDefinite) as exc:
        validate_even_lattice([[2, 3], [3, 2]])
    assert exc.value.index == 2
    assert exc.value.minor == -5


def test_validate_rejects_non_square():
    with pytest.raises(ValueError):
        validate_even_lattice([[2, 1]])


def test_snf_a2():
    snf = smith_normal_form(A2)
    assert snf.diag == (1, 3)


def test_snf_identity():
    snf = smith_normal_form([[1, 0], [0, 1]])
    assert snf.diag == (1, 1)


def test_snf_divisor_chain_diag():
    assert smith_normal_form([[2, 0], [0, 4]]).diag == (2, 4)


def _matmul(a, b):
    n = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


def test_snf_random_roundtrip():
    rng = random.Random(20240612)
    for _ in range(40):
        n = rng.randint(1, 4)
        while True:
            m = [[rng.randint(-6, 6) for _ in range(n)] for _ in range(n)]
            try:
                snf = smith_normal_form(m)
                break
            except Singular:
                continue
        smt = _matmul(_matmul([list(r) for r in snf.s], m), [list(r) for r in snf.t])
        assert smt == [
            [snf.diag[i] if i == j else 0 for j in range(n)] for i in range(n)
        ]
        for k in range(n - 1):
            assert snf.diag[k + 1] % snf.diag[k] == 0
        # independent characterization: ratios of gcds of k x k minors
        assert list(snf.diag) == invariant_factors_from_minors(m) or list(
            snf.diag
        ) == [abs(f) for f in invariant_factors_from_minors(m)]


def test_snf_inverse_roundtrip():
    # S^-1 diag T^-1 reproduces the input exactly
    m = A2
    snf = smith_normal_form(m)
    from .oracles import frac_inverse

    sinv = frac_inverse(snf.s)
    tinv = frac_inverse(snf.t)
    diag = [[Fraction(snf.diag[i] if i == j else 0) for j in range(2)] for i in range(2)]
    prod = [
        [
            sum(sinv[i][k] * diag[k][l] * tinv[l][j] for k in range(2) for l in range(2))
            for j in range(2)
        ]
        for i in range(2)
    ]
    assert prod == [[Fraction(x) for x in row] for row in m]


def test_snf_singular():
    with pytest.raises(Singular):
        smith_normal_form([[1, 1], [1, 1]])


def test_dual_gram_inverse_a2():
    lat = validate_even_lattice(A2)
    inv = dual_gram_inverse(lat)
    assert inv == (
        (Fraction(2, 3), Fraction(-1, 3)),
        (Fraction(-1, 3), Fraction(2, 3)),
    )


def test_dual_gram_inverse_scalar():
    lat = validate_even_lattice(A1)
    assert dual_gram_inverse(lat) == ((Fraction(1, 2),),)


def test_dual_gram_inverse_identity_property():
    lat = validate_even_lattice([[4, 1], [1, 2]])
    inv = dual_gram_inverse(lat)
    n = lat.rank
    prod = [
        [sum(Fraction(lat.gram[i][k]) * inv[k][j] for k in range(n)) for j in range(n)]
        for i in range(n)
    ]
    assert prod == [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def test_rescaled_lattice():
    lat = validate_even_lattice(A2)
    scaled = RescaledLattice(base=lat, twist=3)
    assert scaled.gram_d == ((6, 3), (3, 6))
    with pytest.raises(ValueError):
        RescaledLattice(base=lat, twist=0)


def test_discriminant_group_a2():
    lat = validate_even_lattice(A2)
    grp = discriminant_group(lat, 1)
    assert grp.order == 3
    assert grp.invariant_factors == (3,)
    assert len(grp.representatives) == 3


def test_discriminant_group_a2_twist2():
    lat = validate_even_lattice(A2)
    grp = discriminant_group(lat, 2)
    assert grp.order == 12
    assert grp.invariant_factors == (2, 6)


def test_discriminant_group_a1():
    lat = validate_even_lattice(A1)
    grp = discriminant_group(lat, 1)
    assert grp.order == 2
    assert grp.representatives == ((Fraction(1, 2),), (Fraction(1),))


def test_discriminant_group_duality_and_distinctness():
    lat = validate_even_lattice(A2)
    for d in (-2, 1, 3):
        grp = discriminant_group(lat, d)
        # duality: d * B * rho is integral for every representative
        for rho in grp.representatives:
            for i in range(2):
                pairing = d * sum(Fraction(lat.gram[i][j]) * rho[j] for j in range(2))
                assert pairing.denominator == 1
        # distinctness: differences of representatives never lie in the lattice
        reps = grp.representatives
        for a in range(len(reps)):
            for b in range(a + 1, len(reps)):
                diff = [reps[a][i] - reps[b][i] for i in range(2)]
                assert any(x.denominator != 1 for x in diff)


def test_discriminant_group_order_multiplicativity():
    for gram in (A1, A2, TWO_A1):
        lat = validate_even_lattice(gram)
        base = discriminant_group(lat, 1).order
        for d in range(-5, 6):
            if d == 0:
                continue
            assert discriminant_group(lat, d).order == abs(d) ** lat.rank * base


def test_discriminant_group_overflow():
    lat = validate_even_lattice(A2)
    with pytest.raises(OrderOverflow):
        discriminant_group(lat, 2, cap=10)
    assert DEFAULT_ENUM_CAP == 10**7


def test_enum_cap_env_override(monkeypatch):
    lat = validate_even_lattice(A2)
    monkeypatch.setenv("NILETA_ENUM_CAP", "2")
    with pytest.raises(OrderOverflow):
        discriminant_group(lat, 1)
    monkeypatch.delenv("NILETA_ENUM_CAP")
    assert discriminant_group(lat, 1).order == 3


def test_qbar_a2():
    lat = validate_even_lattice(A2)
    value = qbar(lat, 1, (Fraction(2, 3), Fraction(-1, 3)))
    assert value == QmodZ.of(Fraction(1, 3))


def test_qbar_zero_vector():
    lat = validate_even_lattice(A2)
    assert qbar(lat, 5, (Fraction(0), Fraction(0))).is_zero()


def test_qbar_a1_half():
    lat = validate_even_lattice(A1)
    assert qbar(lat, 1, (Fraction(1, 2),)) == QmodZ.of(Fraction(1, 4))


def test_qbar_not_in_dual():
    lat = validate_even_lattice(A2)
    with pytest.raises(NotInDual):
        qbar(lat, 1, (Fraction(1, 2), Fraction(0)))


def test_qbar_well_defined_under_lattice_shifts():
    rng = random.Random(99)
    lat = validate_even_lattice(A2)
    grp = discriminant_group(lat, 3)
    for rho in grp.representatives[:6]:
        base = qbar(lat, 3, rho)
        for _ in range(4):
            shift = [rng.randint(-3, 3) for _ in range(2)]
            moved = tuple(rho[i] + shift[i] for i in range(2))
            assert qbar(lat, 3, moved) == base


def test_qbar_multiset_invariant_under_basis_change():
    # re-expressing the same lattice in another basis permutes the class values
    rng = random.Random(4)
    lat = validate_even_lattice(A2)
    values = sorted(qbar(lat, 2, rho).value for rho in discriminant_group(lat, 2).representatives)
    for _ in range(5):
        w = [[1, rng.randint(-2, 2)], [0, 1]]
        if rng.random() < 0.5:
            w = [[w[0][0], w[0][1]], [w[1][0] + 1 * w[0][0], w[1][1] + w[0][1]]]
        gram2 = [
            [
                sum(w[k][i] * A2[k][l] * w[l][j] for k in range(2) for l in range(2))
                for j in range(2)
            ]
            for i in range(2)
        ]
        lat2 = validate_even_lattice(gram2)
        values2 = sorted(
            qbar(lat2, 2, rho).value for rho in discriminant_group(lat2, 2).representatives
        )
        assert values2 == values


def test_gauss_milgram_phase():
    # classical cross-check: the quadratic Gauss sum has modulus sqrt(|dis|)
    # and phase equal to rank/8 turns
    for gram in (A1, A2, TWO_A1, [[2, 1], [1, 4]], [[2, 0], [0, 4]]):
        lat = validate_even_lattice(gram)
        grp = discriminant_group(lat, 1)
        total = sum(
            cmath.exp(2j * cmath.pi * float(qbar(lat, 1, rho).value))
            for rho in grp.representatives
        )
        assert abs(abs(total) - math.sqrt(grp.order)) < 1e-9
        phase = (cmath.phase(total) / (2 * cmath.pi)) % 1.0
        expected = (lat.rank / 8) % 1.0
        assert min(abs(phase - expected), 1 - abs(phase - expected)) < 1e-9
