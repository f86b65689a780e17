import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from doubletwist.errors import BranchJump, StepUnderflow
from doubletwist.polyring import CPoly
from doubletwist.rootfinder import aberth, all_roots, continue_branch


def from_roots(roots) -> CPoly:
    return CPoly.from_array(np.poly(roots)[::-1])


def _matched(found, expected, tol):
    found = list(found)
    for r in expected:
        k = int(np.argmin([abs(f - r) for f in found]))
        assert abs(found[k] - r) < tol, (r, found)
        found.pop(k)


@given(st.lists(st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False),
                min_size=1, max_size=9))
def test_recovers_well_separated_roots(roots):
    roots = [complex(r) for r in roots]
    gaps = [abs(a - b) for i, a in enumerate(roots) for b in roots[i + 1:]]
    if gaps and min(gaps) < 0.1:
        return
    _matched(all_roots(from_roots(roots)).roots, roots, 1e-8)


def test_against_companion_matrix():
    rng = np.random.default_rng(11)
    for _ in range(30):
        c = rng.normal(size=12) + 1j * rng.normal(size=12)
        ours = all_roots(CPoly.from_array(c)).roots
        _matched(ours, np.roots(c[::-1]), 1e-8)


def test_zero_roots_are_exact():
    rs = all_roots(CPoly((0, 0, -2, 0, 1)))
    assert rs.roots.count(0j) == 2
    _matched(rs.roots, [0, 0, math.sqrt(2), -math.sqrt(2)], 1e-13)


def test_double_root():
    rs = all_roots(from_roots([1.5, 1.5, -1]))
    # a double root is only determined to about sqrt(machine epsilon)
    _matched(rs.roots, [1.5, 1.5, -1], 1e-6)


def test_ordering_and_residuals():
    rs = all_roots(from_roots([2, -1j, 1j, -3]))
    assert [r.real for r in rs.roots] == sorted(r.real for r in rs.roots)
    assert max(rs.residuals) < 1e-14
    assert rs.degree == 4


def test_degree_zero_rejected():
    with pytest.raises(ValueError):
        all_roots(CPoly((3,)))


def test_aberth_direct():
    z = aberth(np.array([1, 0, -1], dtype=complex))
    assert sorted(z.real) == pytest.approx([-1, 1], abs=1e-12)


def test_continuation_follows_smooth_root():
    # z^2 - (omega + 1) has the root sqrt(omega + 1)
    def family(omega):
        return CPoly((-(omega + 1), 0, 1))

    path = continue_branch(family, 1.0, 0.0, 3.0, step=0.05)
    for omega, z in path.samples:
        assert abs(z - math.sqrt(omega + 1)) < 1e-12
    assert path.end[0] == 3.0


def test_continuation_stops_at_a_collision():
    # roots +-sqrt(omega) collide at omega = 0
    def family(omega):
        return CPoly((-omega, 0, 1))

    with pytest.raises((StepUnderflow, BranchJump)) as info:
        continue_branch(family, 1.0, 1.0, -1.0, step=0.05)
    assert abs(info.value.omega) < 1e-6
    assert info.value.path.samples[0] == (1.0, 1.0)


def test_continuation_rejects_non_root():
    with pytest.raises(ValueError):
        continue_branch(lambda o: CPoly((-1, 0, 1)), 0.5, 0.0, 1.0)
