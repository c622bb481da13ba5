import math
from fractions import Fraction

import numpy as np
import pytest

from toricq.errors import DomainError, PreconditionError
from toricq.orbits import (MAXIMAL_PIECE, ExactVector, classify_orbit,
                           equivalent, n_orbit_equal, p_function, stratum_of)
from toricq.sampling import Sampler, nonclosed_flow_direction

SQ2 = math.sqrt(0.5)


def test_classify_interior(pyramid):
    lat = pyramid.face_lattice()
    oc = classify_orbit(pyramid, lat, [1, 1, 1, 1, 1])
    assert oc.closed and oc.face_E is lat.interior
    assert np.allclose(oc.closed_rep, [1, 1, 1, 1, 1])


def test_classify_nonclosed_pyramid(pyramid):
    lat = pyramid.face_lattice()
    oc = classify_orbit(pyramid, lat, [0, 0, 0, 1, 1])
    assert not oc.closed
    assert oc.i_z == (1, 2, 3)
    assert oc.face_E.index_set == (1, 2, 3, 4)
    assert np.allclose(oc.closed_rep, [0, 0, 0, 0, 1])
    assert oc.retracted.zero_set == (1, 2, 3, 4)


def test_classify_closed_apex(pyramid):
    lat = pyramid.face_lattice()
    oc = classify_orbit(pyramid, lat, [0, 0, 0, 0, 1])
    assert oc.closed and oc.face_E.index_set == (1, 2, 3, 4)


def test_classify_outside_domain(pyramid):
    lat = pyramid.face_lattice()
    with pytest.raises(DomainError):
        classify_orbit(pyramid, lat, [0, 0, 0, 0, 0])


def test_classify_exactness_flag(pyramid, qq):
    lat = pyramid.face_lattice()
    ev = ExactVector(qq, [0, 0, 0, 0, 1], [0, 0, 0, 0, 0])
    oc = classify_orbit(pyramid, lat, ev)
    assert oc.exactness == "exact"
    oc2 = classify_orbit(pyramid, lat, [0, 0, 0, 0, 1])
    assert oc2.exactness == "approximate"


def test_canonical_idempotence(pyramid):
    lat = pyramid.face_lattice()
    s = Sampler(pyramid, 17)
    for _ in range(20):
        z = s.random_admissible_point()
        oc = classify_orbit(pyramid, lat, z)
        oc2 = classify_orbit(pyramid, lat, oc.closed_rep)
        assert oc2.closed
        assert np.allclose(oc2.closed_rep, oc.closed_rep)


def test_p_function_trivial(interval):
    pf = p_function(interval, [Fraction(1, 2)], [Fraction(1, 2)])
    assert all(c.is_zero() for c in pf.exponents)
    assert pf.evaluate([3 + 4j, 2j]) == 1.0


def test_p_function_interval(interval):
    pf = p_function(interval, [1], [0])
    assert [c.as_fraction() for c in pf.exponents] == [1, -1]
    w = np.array([2 + 1j, 0.5 - 0.25j])
    for t in (2.0, 0.3):
        assert pf.evaluate(t * w) == pytest.approx(pf.evaluate(w))
    # eta = 0 is the vertex with facet 1 active
    assert pf.domain_face.index_set == (1,)


def test_p_function_exponent_values_pyramid(pyramid):
    # apex vs base barycenter: exact pairings give -1 on slants, +1 on base
    pf = p_function(pyramid, [0, 0, 1], [0, 0, 0])
    vals = [c.as_fraction() for c in pf.exponents]
    assert vals == [-1, -1, -1, -1, 1]


def test_p_function_zero_exponents_on_shared_facets(pyramid):
    # edge point and apex both lie on slanted facets 1 and 3
    lat = pyramid.face_lattice()
    edge = lat.face_of_active_set((1, 3))
    xi = lat.relint_point(edge)
    pf = p_function(pyramid, xi, [0, 0, 1], lat)
    for j in (1, 3):
        assert pf.exponents[j - 1].is_zero()
    assert pf.domain_face.index_set == (1, 2, 3, 4)


def test_p_function_domain_error(interval):
    pf = p_function(interval, [1], [0])
    with pytest.raises(DomainError):
        pf.evaluate([1.0, 0.0])  # negative exponent at a zero coordinate


def test_p_function_outside_polytope(interval):
    with pytest.raises(PreconditionError):
        p_function(interval, [2], [0])


def test_p_invariance_sampled(pyramid):
    lat = pyramid.face_lattice()
    s = Sampler(pyramid, 23)
    verts = [lat.relint_point(v) for v in lat.vertices()]
    pf = p_function(pyramid, verts[0], verts[1], lat)
    w = s.point_with_zeros(())
    base = pf.evaluate(w)
    for _ in range(30):
        theta, Y = s.nc_pair()
        moved = s.apply(w, theta, Y)
        assert abs(pf.evaluate(moved) - base) <= 1e-7 * abs(base)


def test_n_orbit_equal_exact(interval, qq):
    half = Fraction(1, 2)
    x = ExactVector(qq, [half, half], [0, 0])
    y = ExactVector(qq, [half, half], [Fraction(1, 3), Fraction(1, 3)])
    v = n_orbit_equal(interval, x, y)
    assert v.equal and v.exactness == "exact"
    y2 = ExactVector(qq, [half, half], [Fraction(1, 3), 0])
    v2 = n_orbit_equal(interval, x, y2)
    assert not v2.equal and v2.exactness == "exact"


def test_n_orbit_equal_reflexive(interval):
    x = [SQ2, SQ2]
    v = n_orbit_equal(interval, x, x)
    assert v.equal


def test_n_orbit_equal_vertex_freedom(interval, qq):
    x = ExactVector(qq, [1, 0], [0, 0])
    y = ExactVector(qq, [1, 0], [Fraction(1, 7), 0])
    assert n_orbit_equal(interval, x, y).equal


def test_n_orbit_equal_moduli_mismatch(interval, qq):
    x = ExactVector(qq, [Fraction(1, 2), Fraction(1, 2)], [0, 0])
    bad = ExactVector(qq, [Fraction(1, 4), Fraction(3, 4)], [0, 0])
    v = n_orbit_equal(interval, x, bad)
    assert not v.equal and "moduli" in v.reason


def test_n_orbit_equal_precondition(interval):
    with pytest.raises(PreconditionError):
        n_orbit_equal(interval, [1, 1], [1, 1])


def test_equivalent_reflexive(interval):
    res = equivalent(interval, [1, 1], [1, 1])
    assert res.equivalent


def test_equivalent_diagonal_scaling(interval):
    res = equivalent(interval, [1, 1], [2, 2])
    assert res.equivalent
    assert np.allclose(np.abs(res.orbit_z.retracted.x), [SQ2, SQ2], atol=1e-8)
    assert np.allclose(np.abs(res.orbit_w.retracted.x), [SQ2, SQ2], atol=1e-8)


def test_equivalent_distinct_vertices(interval):
    res = equivalent(interval, [1, 0], [0, 1])
    assert not res.equivalent
    assert res.reason == "closure faces differ"


def test_equivalent_axioms_sampled(pyramid):
    lat = pyramid.face_lattice()
    s = Sampler(pyramid, 41)
    for _ in range(15):
        z = s.random_admissible_point()
        theta1, Y1 = s.nc_pair()
        theta2, Y2 = s.nc_pair()
        gz = s.apply(z, theta1, Y1)
        ggz = s.apply(gz, theta2, Y2)
        assert equivalent(pyramid, z, z).equivalent
        assert equivalent(pyramid, z, gz).equivalent
        assert equivalent(pyramid, gz, z).equivalent
        assert equivalent(pyramid, gz, ggz).equivalent
        assert equivalent(pyramid, z, ggz).equivalent


def test_equivalent_exact_phase_separation(interval, qq):
    half = Fraction(1, 2)
    x = ExactVector(qq, [half, half], [0, 0])
    y = ExactVector(qq, [half, half], [Fraction(1, 3), 0])
    res = equivalent(interval, x, y)
    assert not res.equivalent
    assert res.exactness == "exact"


def test_stratum_of(pyramid):
    lat = pyramid.face_lattice()
    assert stratum_of(pyramid, lat, [1, 1, 1, 1, 1]) == MAXIMAL_PIECE
    apex = stratum_of(pyramid, lat, [0, 0, 0, 0, 1])
    assert apex.index_set == (1, 2, 3, 4)
    assert stratum_of(pyramid, lat, [0, 1, 1, 1, 1]) == MAXIMAL_PIECE


def test_flow_confirms_nonclosedness(pyramid):
    lat = pyramid.face_lattice()
    oc = classify_orbit(pyramid, lat, [0, 0, 0, 1, 1])
    Y = nonclosed_flow_direction(pyramid, oc)
    z = np.array([0, 0, 0, 1, 1], dtype=complex)
    prev = None
    for t in np.linspace(0.0, 2.5, 11):
        moved = np.exp(-2 * math.pi * t * Y) * z
        decaying = abs(moved[3])  # label 4 = I_E \ I_z
        stable = abs(moved[4])
        if prev is not None:
            assert decaying < prev
        prev = decaying
        assert stable == pytest.approx(1.0)
    assert prev <= 1e-6


def test_flow_direction_requires_nonclosed(pyramid):
    lat = pyramid.face_lattice()
    oc = classify_orbit(pyramid, lat, [1, 1, 1, 1, 1])
    with pytest.raises(PreconditionError):
        nonclosed_flow_direction(pyramid, oc)


def test_canonical_reduced_witness(pyramid):
    lat = pyramid.face_lattice()
    z = np.array([0, 0, 0, 0, 1j], dtype=complex)
    oc = classify_orbit(pyramid, lat, z)
    x, xi = oc.canonical()
    support = np.flatnonzero(x != 0)
    assert np.angle(x[support[0]]) == pytest.approx(0.0)
