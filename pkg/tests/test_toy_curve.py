import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from suci.errors import TooLarge
from suci.toy_curve import EXAMPLE_CURVE, INFINITY, Affine, ToyCurve, points_csv

C = EXAMPLE_CURVE
POINTS = sorted(C.affine_points())
ALL = [INFINITY] + POINTS

# exhaustive 89 x 89 scan, pinned before the module existed
F89_POINT_COUNT = 80


def euler_count(p, a, b):
    """Point count via Euler's criterion: each x contributes 1 + legendre(rhs)."""
    total = 1
    for x in range(p):
        rhs = (x ** 3 + a * x + b) % p
        if rhs == 0:
            total += 1
        elif pow(rhs, (p - 1) // 2, p) == 1:
            total += 2
    return total


@pytest.mark.parametrize("x,y,expected", [(0, 0, True), (88, 0, True), (1, 1, False), (1, 0, True)])
def test_contains_examples(x, y, expected):
    assert C.contains(x, y) is expected


def test_curve_coefficients_reduced():
    assert (C.p, C.a, C.b) == (89, 88, 0)


def test_f89_count_is_pinned_and_matches_euler():
    pts = C.enumerate_points()
    assert len(pts) == F89_POINT_COUNT
    assert euler_count(89, -1, 0) == F89_POINT_COUNT
    assert INFINITY in pts


def test_f5_small_curve_hand_enumeration():
    c = ToyCurve(5, 1, 1)
    brute = {Affine(x, y) for x in range(5) for y in range(5) if (y * y - x ** 3 - x - 1) % 5 == 0}
    assert brute == {Affine(0, 1), Affine(0, 4), Affine(2, 1), Affine(2, 4), Affine(3, 1),
                     Affine(3, 4), Affine(4, 2), Affine(4, 3)}
    assert c.enumerate_points() == brute | {INFINITY}
    assert len(c.enumerate_points()) == 9


def test_every_enumerated_point_is_on_curve():
    assert all(C.contains(pt.x, pt.y) for pt in POINTS)


def test_enumeration_guard():
    with pytest.raises(TooLarge):
        ToyCurve(10007, 1, 1).enumerate_points()


@pytest.mark.parametrize("p,a,b", [(89, 0, 0), (5, 0, 0), (91, 1, 1), (3, 1, 1), (2, 1, 1)])
def test_rejects_singular_or_bad_modulus(p, a, b):
    with pytest.raises(ValueError):
        ToyCurve(p, a, b)


def test_point_constructor_rejects_off_curve():
    with pytest.raises(ValueError):
        C.point(1, 1)


def test_identity_and_inverse_laws():
    for P in ALL:
        assert C.add(P, INFINITY) == P
        assert C.add(INFINITY, P) == P
        assert C.add(P, C.negate(P)) is INFINITY


def test_closure_and_commutativity_exhaustive():
    pts = set(ALL)
    for P, Q in itertools.product(ALL, repeat=2):
        R = C.add(P, Q)
        assert R in pts
        assert R == C.add(Q, P)


def test_associativity_random_triples():
    rnd = random.Random(7)
    for _ in range(100):
        P, Q, R = (rnd.choice(ALL) for _ in range(3))
        assert C.add(C.add(P, Q), R) == C.add(P, C.add(Q, R))


def test_associativity_exhaustive_small_curve():
    c = ToyCurve(5, 1, 1)
    pts = list(c.enumerate_points())
    for P, Q, R in itertools.product(pts, repeat=3):
        assert c.add(c.add(P, Q), R) == c.add(P, c.add(Q, R))


def test_doubling_two_torsion():
    # points with y = 0 are their own negatives
    for pt in (Affine(0, 0), Affine(1, 0), Affine(88, 0)):
        assert C.add(pt, pt) is INFINITY
        assert C.order(pt) == 2


def test_scalar_mul_basics():
    for G in POINTS:
        assert C.scalar_mul(0, G) is INFINITY
        assert C.scalar_mul(1, G) == G
        assert C.scalar_mul(C.order(G), G) is INFINITY
        five = INFINITY
        for _ in range(5):
            five = C.add(five, G)
        assert C.scalar_mul(5, G) == five
    with pytest.raises(ValueError):
        C.scalar_mul(-1, POINTS[0])


def test_orders_divide_group_size():
    orders = {C.order(G) for G in POINTS}
    assert all(F89_POINT_COUNT % n == 0 for n in orders)
    assert max(orders) == 20


@settings(max_examples=200, deadline=None)
@given(idx=st.integers(0, len(POINTS) - 1), k=st.integers(0, 10_000))
def test_scalar_mul_reduces_mod_order(idx, k):
    G = POINTS[idx]
    assert C.scalar_mul(k, G) == C.scalar_mul(k % C.order(G), G)


@settings(max_examples=200, deadline=None)
@given(idx=st.integers(0, len(POINTS) - 1), j=st.integers(0, 500), k=st.integers(0, 500))
def test_scalar_mul_is_homomorphic(idx, j, k):
    G = POINTS[idx]
    assert C.add(C.scalar_mul(j, G), C.scalar_mul(k, G)) == C.scalar_mul(j + k, G)


def _generator():
    return max(POINTS, key=C.order)


def test_ecdlp_examples():
    G = _generator()
    n = C.order(G)
    assert n > 7
    assert C.ecdlp_brute_force(G, C.scalar_mul(7, G), 100) == 7
    assert C.ecdlp_brute_force(G, G, n) == 1
    assert C.ecdlp_brute_force(G, INFINITY, n) == 0


def test_ecdlp_outside_subgroup_is_absent():
    G = _generator()
    subgroup = set(itertools.islice(C.multiples(G), C.order(G)))
    outside = next(P for P in POINTS if P not in subgroup)
    assert C.ecdlp_brute_force(G, outside, 1000) is None


def test_ecdlp_bound_respected():
    G = _generator()
    assert C.ecdlp_brute_force(G, C.scalar_mul(9, G), 5) is None
    with pytest.raises(ValueError):
        C.ecdlp_brute_force(G, G, 0)


def test_ecdlp_inverts_scalar_mul_for_every_point():
    for G in POINTS:
        n = C.order(G)
        for k in range(n):
            assert C.ecdlp_brute_force(G, C.scalar_mul(k, G), n) == k


def test_points_csv_shape():
    lines = points_csv(C).splitlines()
    assert lines[0] == "x,y"
    assert len(lines) == 1 + F89_POINT_COUNT - 1
    assert "88,0" in lines
