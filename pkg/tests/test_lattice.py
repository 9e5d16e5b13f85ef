"""Lattice engine tests.

Oracles
-------
* Gram fixtures come from closed-form trace computations in quadratic
  fields (ring basis {1, theta}).
* Generator matrices are compared against closed-form embedding values
  (golden ratio rows, sqrt(2)/sqrt(6) CM layout) and against the exact
  Gram through the numeric product M * M^t at two precisions.
* Duality is certified through biduality, det(L) * det(dual) = 1, and
  module self-duality of a unimodular lattice.
* minimum/theta answers are checked against exhaustive enumeration over
  the exact coefficient box |x_i| <= sqrt(B * (G^-1)_ii) -- a bound that
  holds for every vector of norm <= B and is computed with exact
  rational arithmetic, fully independent of the Fincke-Pohst tree.
* Modularity verification consumes self-proving witnesses from the
  existence module; negative controls corrupt beta or swap the module.
"""

import math
from fractions import Fraction
from itertools import product

import pytest

from arakelov.existence import classify
from arakelov.fields import FieldMismatch, SpecError, make_field
from arakelov.ideals import FractionalIdeal, realize
from arakelov.lattice import (
    IdealLattice,
    ModularityFailure,
    build,
    dual,
    generator_matrix,
    minimum,
    theta_prefix,
    verify_modularity,
)
from arakelov.linalg import FormError, invert, lll_reduce, mat_mul, transpose


def witness_lattice(spec, level, trace_type=True):
    field = make_field(spec)
    w = classify(field, trace_type=trace_type).witnesses[level]
    return build(field, realize(w.ideal), w.alpha), w


def brute_force_norms(gram, bound):
    """Exhaustive counts {norm: vectors} for 0 < norm <= bound, both signs.

    For any x with x^t G x <= B, Cauchy-Schwarz in the G-inner product
    gives x_i^2 <= B * (G^-1)_ii, so the box below contains every
    candidate; norms are evaluated exactly.
    """
    n = len(gram)
    G = [[Fraction(x) for x in row] for row in gram]
    Ginv = invert(G)
    B = Fraction(bound)
    radii = [math.isqrt(int(B * Ginv[i][i])) for i in range(n)]
    counts = {}
    for x in product(*(range(-r, r + 1) for r in radii)):
        if not any(x):
            continue
        norm = sum(G[i][j] * x[i] * x[j] for i in range(n) for j in range(n))
        if 0 < norm <= B:
            counts[norm] = counts.get(norm, 0) + 1
    return counts


class FakeWitness:
    """Duck-typed witness for negative controls (bypasses self-validation)."""

    def __init__(self, field, alpha, level, beta):
        self.field = field
        self.alpha = alpha
        self.level = level
        self.beta = beta


# --------------------------------------------------------------------------
# build
# --------------------------------------------------------------------------

def test_build_gram_fixtures():
    cases = [
        ("quad:+5", None, [[2, 1], [1, 3]]),
        ("quad:+2", 2, [[2, 0], [0, 1]]),
        ("quad:-3", None, [[2, 1], [1, 2]]),
    ]
    for spec, level, expected in cases:
        field = make_field(spec)
        if level is None:
            ideal = FractionalIdeal.ring(field)
        else:
            w = classify(field).witnesses[level]
            ideal = realize(w.ideal)
        lat = build(field, ideal, field.one())
        assert [[int(x) for x in row] for row in lat.gram] == expected


def test_build_rejects_foreign_parts():
    f5 = make_field("quad:+5")
    f2 = make_field("quad:+2")
    with pytest.raises(FieldMismatch):
        build(f5, FractionalIdeal.ring(f2), f5.one())
    with pytest.raises(FieldMismatch):
        build(f5, FractionalIdeal.ring(f5), f2.one())


def test_build_rejects_indefinite_alpha():
    f5 = make_field("quad:+5")
    mixed = f5.element([-1, 1])  # theta - 1 has embeddings 0.618 and -1.618
    with pytest.raises(FormError):
        build(f5, FractionalIdeal.ring(f5), mixed)


def test_ideal_lattice_is_immutable():
    lat, _ = witness_lattice("quad:+5", 5)
    with pytest.raises(AttributeError):
        lat.gram = ()
    assert lat.dimension == 2
    assert lat.determinant() == 5
    assert lat.is_integral()
    assert not lat.is_even()


def test_degree_one_field():
    field = make_field("realcyclo:3")
    lat = build(field, FractionalIdeal.ring(field), field.one())
    assert lat.gram == ((Fraction(1),),)
    assert minimum(lat) == (1, 2)
    assert theta_prefix(lat, 4) == [(0, 1), (1, 2), (4, 2)]


# --------------------------------------------------------------------------
# generator matrices
# --------------------------------------------------------------------------

def test_generator_matrix_golden_ratio_rows():
    field = make_field("quad:+5")
    lat = build(field, FractionalIdeal.ring(field), field.one())
    M = generator_matrix(lat, precision=128)
    assert all(abs(x - 1) < 1e-30 for x in M[0])
    want = sorted([(1 + math.sqrt(5)) / 2, (1 - math.sqrt(5)) / 2])
    got = sorted(float(x) for x in M[1])
    assert all(abs(a - b) < 1e-12 for a, b in zip(got, want))


def test_generator_matrix_cm_sqrt2_layout():
    field = make_field("quad:-3")
    lat = build(field, FractionalIdeal.ring(field), field.one())
    M = generator_matrix(lat, precision=128)
    r2, r6 = math.sqrt(2), math.sqrt(6)
    assert abs(float(M[0][0]) - r2) < 1e-12 and abs(float(M[0][1])) < 1e-30
    assert abs(abs(float(M[1][0])) - r2 / 2) < 1e-12
    assert abs(abs(float(M[1][1])) - r6 / 2) < 1e-12


@pytest.mark.parametrize("precision", [128, 192])
def test_generator_matrix_numeric_cross_check(precision):
    mpmath = pytest.importorskip("mpmath")
    field = make_field("realcyclo:13")
    lat = build(field, FractionalIdeal.ring(field), field.one())
    M = generator_matrix(lat, precision=precision)
    m = len(M)
    with mpmath.workprec(precision + 32):
        tol = mpmath.ldexp(1, -(precision // 2))
        for i in range(m):
            for j in range(m):
                approx = mpmath.fsum(M[i][k] * M[j][k] for k in range(m))
                g = lat.gram[i][j]
                assert abs(approx - mpmath.mpf(g.numerator) / g.denominator) < tol


def test_generator_matrix_with_nontrivial_alpha():
    lat, _ = witness_lattice("realcyclo:13", 1, trace_type=False)
    M = generator_matrix(lat, precision=160)  # inline product check must pass
    assert len(M) == 6 and len(M[0]) == 6


# --------------------------------------------------------------------------
# duals
# --------------------------------------------------------------------------

@pytest.mark.parametrize("spec", ["quad:+5", "quad:-3", "realcyclo:7"])
def test_dual_biduality_and_det_product(spec):
    field = make_field(spec)
    lat = build(field, FractionalIdeal.ring(field), field.one())
    d = dual(lat)
    dd = dual(d)
    assert dd.ideal == lat.ideal
    assert dd.gram == lat.gram
    assert Fraction(lat.determinant()) * Fraction(d.determinant()) == 1


def test_dual_of_unimodular_lattice_is_itself():
    lat, _ = witness_lattice("realcyclo:13", 1, trace_type=False)
    d = dual(lat)
    assert d.ideal == lat.ideal
    assert d.gram == lat.gram
    assert lat.determinant() == 1


# --------------------------------------------------------------------------
# modularity verification
# --------------------------------------------------------------------------

def test_verify_quad3_even_modular_minimum_two():
    lat, w = witness_lattice("quad:+3", 3)
    report = verify_modularity(lat, w)
    assert report.witness_checked and report.modular_level == 3
    assert report.integral and report.even
    assert report.determinant == 3
    # this is the hexagonal lattice A2: minimum 2, six minimal vectors
    assert minimum(lat) == (2, 6)


def test_verify_table_row_44():
    lat, w = witness_lattice("realcyclo:44", 11)
    report = verify_modularity(lat, w)
    assert report.modular_level == 11
    assert report.determinant == 11 ** 5
    assert report.dimension == 10
    assert report.even
    assert minimum(lat)[0] == 6


def test_verify_corrupted_beta_fails_clause_i():
    lat, w = witness_lattice("quad:+3", 3)
    bad = FakeWitness(w.field, w.alpha, w.level, w.beta + w.field.one())
    with pytest.raises(ModularityFailure) as exc:
        verify_modularity(lat, bad)
    assert exc.value.clause == "i"


def test_verify_wrong_module_fails_clause_ii():
    field = make_field("quad:+2")
    w = classify(field).witnesses[2]
    ring_lattice = build(field, FractionalIdeal.ring(field), field.one())
    with pytest.raises(ModularityFailure) as exc:
        verify_modularity(ring_lattice, w)
    assert exc.value.clause == "ii"


def test_verify_guards_field_and_alpha():
    lat5, _ = witness_lattice("quad:+5", 5)
    _, w2 = witness_lattice("quad:+2", 2)
    with pytest.raises(FieldMismatch):
        verify_modularity(lat5, w2)
    field = make_field("quad:+2")
    w = classify(field).witnesses[2]
    scaled = build(field, realize(w.ideal), field.rational(2))
    with pytest.raises(SpecError):
        verify_modularity(scaled, w)


# --------------------------------------------------------------------------
# minimum
# --------------------------------------------------------------------------

def test_minimum_fixtures():
    assert minimum([[2, 0], [0, 1]]) == (1, 2)
    assert minimum([[1, 0], [0, 1]]) == (1, 4)
    assert minimum([[2, 1], [1, 2]]) == (2, 6)
    assert minimum([[2, 1], [1, 3]]) == (2, 2)


def test_minimum_realcyclo36_is_two():
    lat, w = witness_lattice("realcyclo:36", 3)
    report = verify_modularity(lat, w)
    assert report.even and report.determinant == 27
    assert minimum(lat)[0] == 2


def test_minimum_realcyclo92_is_twelve():
    lat, w = witness_lattice("realcyclo:92", 23)
    report = verify_modularity(lat, w)
    assert report.modular_level == 23
    assert report.determinant == 23 ** 11
    assert minimum(lat)[0] == 12


def test_minimum_rejects_non_positive_definite():
    with pytest.raises(FormError):
        minimum([[1, 2], [2, 1]])
    with pytest.raises(FormError):
        minimum([[0, 0], [0, 0]])


BRUTE_GRAMS = [
    [[2, 1], [1, 3]],
    [[2, 0], [0, 1]],
    [[2, 1], [1, 2]],
    [[4, 1, 0], [1, 3, 1], [0, 1, 2]],
    [[2, 1, 0, 0], [1, 2, 1, 0], [0, 1, 2, 1], [0, 0, 1, 2]],
]


@pytest.mark.parametrize("gram", BRUTE_GRAMS)
def test_minimum_matches_brute_force(gram):
    mu, kissing = minimum(gram)
    counts = brute_force_norms(gram, max(row[i] for i, row in enumerate(gram)))
    expected_mu = min(counts)
    assert mu == expected_mu
    assert kissing == counts[expected_mu]


def test_minimum_matches_brute_force_dim6():
    # reduce first so the search box stays small; minimum and kissing are
    # invariants of the module, and invariance under lll_reduce has its own
    # test below
    lat, _ = witness_lattice("realcyclo:36", 3)
    mu, kissing = minimum(lat)
    reduced, _ = lll_reduce([list(r) for r in lat.gram])
    counts = brute_force_norms(reduced, mu)
    assert min(counts) == mu and counts[mu] == kissing


# --------------------------------------------------------------------------
# theta prefixes
# --------------------------------------------------------------------------

def test_theta_fixtures():
    assert theta_prefix([[1, 0], [0, 1]], 2) == [(0, 1), (1, 4), (2, 4)]
    assert theta_prefix([[2, 1], [1, 2]], 2) == [(0, 1), (2, 6)]
    eye6 = [[1 if i == j else 0 for j in range(6)] for i in range(6)]
    assert theta_prefix(eye6, 1) == [(0, 1), (1, 12)]
    assert theta_prefix([[2, 1], [1, 2]], 0) == [(0, 1)]


def test_theta_dim6_unimodular_matches_z6():
    lat, _ = witness_lattice("realcyclo:13", 1, trace_type=False)
    assert theta_prefix(lat, 1) == [(0, 1), (1, 12)]
    assert minimum(lat) == (1, 12)


@pytest.mark.parametrize("gram,bound", [
    ([[2, 1], [1, 3]], 12),
    ([[4, 1, 0], [1, 3, 1], [0, 1, 2]], 8),
    ([[2, 1, 0, 0], [1, 2, 1, 0], [0, 1, 2, 1], [0, 0, 1, 2]], 6),
])
def test_theta_matches_brute_force(gram, bound):
    got = theta_prefix(gram, bound)
    expected = brute_force_norms(gram, bound)
    assert got[0] == (0, 1)
    assert {nrm: c for nrm, c in got[1:]} == expected
    assert all(c % 2 == 0 for _, c in got[1:])


def test_theta_invariant_under_unimodular_change():
    hexagonal = [[2, 1], [1, 2]]
    U = [[1, 3], [0, 1]]
    scrambled = mat_mul(transpose(U), mat_mul(hexagonal, U))
    assert theta_prefix(scrambled, 6) == theta_prefix(hexagonal, 6)
    lat, _ = witness_lattice("realcyclo:36", 3)
    gram = [list(r) for r in lat.gram]
    U6 = [[1 if i == j else 0 for j in range(6)] for i in range(6)]
    U6[0][5] = 7
    U6[2][4] = -3
    scrambled6 = mat_mul(transpose(U6), mat_mul(gram, U6))
    assert theta_prefix(scrambled6, 4) == theta_prefix(gram, 4)


def test_theta_rejects_negative_bound():
    with pytest.raises(SpecError):
        theta_prefix([[1, 0], [0, 1]], -1)
