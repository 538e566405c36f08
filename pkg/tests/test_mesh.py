import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hausdim.errors import ConfigurationError, InputError, InvarianceError
from hausdim.maps import DigitSetSpec, digits_array, moebius_maps, perturbed_maps
from hausdim.mesh import (
    build_mesh_1d,
    build_mesh_2d,
    interp_weights_1d,
    interp_weights_2d,
    locate_1d,
    locate_2d,
    refine_domain_1d,
)


def test_refine_domain_examples():
    maps = moebius_maps([1, 2])
    assert refine_domain_1d(maps, 0) == [(0.0, 1.0)]
    (a, b), = refine_domain_1d(maps, 1)
    assert (a, b) == pytest.approx((1 / 3, 1.0))
    ivs = refine_domain_1d(maps, 2)
    assert len(ivs) == 2
    assert ivs[0] == pytest.approx((1 / 3, 3 / 7))
    assert ivs[1] == pytest.approx((1 / 2, 3 / 4))


def test_refine_domain_rejects_negative_depth():
    with pytest.raises(InputError):
        refine_domain_1d(moebius_maps([1]), -1)


@pytest.mark.parametrize("maps", [moebius_maps([1, 2]), moebius_maps([2, 4, 6, 8, 10]),
                                  perturbed_maps(0.7), moebius_maps(range(1, 11))])
@pytest.mark.parametrize("depth", [1, 2, 3])
def test_refined_domain_is_forward_invariant(maps, depth):
    ivs = refine_domain_1d(maps, depth)
    for th in maps:
        for a, b in ivs:
            y = th(np.linspace(a, b, 1000))
            inside = np.zeros_like(y, dtype=bool)
            for c, d in ivs:
                inside |= (y >= c - 1e-15) & (y <= d + 1e-15)
            assert inside.all()


def test_build_mesh_1d_examples():
    m = build_mesh_1d([(0.0, 1.0)], 0.25)
    np.testing.assert_array_equal(m.nodes, [0, 0.25, 0.5, 0.75, 1])
    assert build_mesh_1d([(0.0, 1.0)], 1.0).n == 2
    m = build_mesh_1d([(1 / 3, 3 / 7), (1 / 2, 3 / 4)], 0.05)
    assert m.nodes[0] == 1 / 3 and m.nodes[m.counts[0] - 1] == 3 / 7
    assert m.nodes[m.starts[1]] == 1 / 2 and m.nodes[-1] == 3 / 4
    assert list(m.counts) == [3, 6]


def test_build_mesh_1d_errors():
    with pytest.raises(InputError):
        build_mesh_1d([], 0.1)
    with pytest.raises(InputError):
        build_mesh_1d([(0, 0.5), (0.4, 1)], 0.1)
    with pytest.raises(InputError):
        build_mesh_1d([(0, 1)], 0.0)


@given(st.floats(1e-3, 0.5))
def test_mesh_1d_spacing_and_counts(h):
    ivs = [(0.1, 0.35), (0.5, 0.9)]
    m = build_mesh_1d(ivs, h)
    for (a, b), st_, c, hi in zip(ivs, m.starts, m.counts, m.spacings):
        x = m.nodes[st_:st_ + c]
        assert x[0] == a and x[-1] == b
        assert hi <= h * (1 + 1e-12)
        assert np.all(np.diff(x) > 0)
        np.testing.assert_allclose(np.diff(x), hi, rtol=1e-9)


def test_interp_weights_1d_examples():
    m = build_mesh_1d([(0.0, 1.0)], 0.25)
    assert interp_weights_1d(m, 0.5) == interp_weights_1d(m, 0.5)
    st_ = interp_weights_1d(m, 0.5)
    assert st_.weights == (1.0,) and m.nodes[st_.node_indices[0]] == 0.5
    st_ = interp_weights_1d(m, 0.375)
    assert st_.node_indices == (1, 2) and st_.weights == pytest.approx((0.5, 0.5))
    st_ = interp_weights_1d(m, 0.25 + 0.0625)
    assert st_.weights == pytest.approx((0.75, 0.25))


def test_interp_weights_1d_outside_raises():
    m = build_mesh_1d([(0.1, 0.3), (0.5, 0.7)], 0.05)
    with pytest.raises(InvarianceError):
        interp_weights_1d(m, 0.4)
    with pytest.raises(InvarianceError):
        interp_weights_1d(m, 0.8)
    # snapping tolerance at an interval end
    assert interp_weights_1d(m, 0.7 + 1e-16).weights == (1.0,)


def test_1d_partition_of_unity_and_linear_reproduction():
    rng = np.random.default_rng(0)
    m = build_mesh_1d([(1 / 3, 3 / 7), (1 / 2, 3 / 4)], 1e-3)
    u = np.concatenate([rng.uniform(1 / 3, 3 / 7, 50_000), rng.uniform(0.5, 0.75, 50_000)])
    left, right, t = locate_1d(m, u)
    assert np.max(np.abs((1 - t) + t - 1)) <= 1e-14
    assert np.all((t >= 0) & (t <= 1))
    f = 2.5 * m.nodes - 0.7
    approx = (1 - t) * f[left] + t * f[right]
    np.testing.assert_allclose(approx[:10_000], 2.5 * u[:10_000] - 0.7, atol=1e-12)


def test_build_mesh_2d_coarse_example():
    m = build_mesh_2d(0.5, 0)
    assert sorted((z.real, z.imag) for z in m.nodes) == sorted(
        [(0, 0), (0.5, 0), (1, 0), (0, 0.5), (0.5, 0.5), (1, 0.5)])
    assert m.index_of(0j) == 0


def test_build_mesh_2d_rejects_bad_h():
    with pytest.raises(ConfigurationError):
        build_mesh_2d(0.3, 0)
    with pytest.raises(ConfigurationError):
        build_mesh_2d(0.1, -1)


@pytest.mark.parametrize("h", [0.05, 0.02, 0.01])
def test_mesh_2d_node_count_scales_with_area(h):
    ratio = build_mesh_2d(h / 2, 0).n / build_mesh_2d(h, 0).n
    assert 3.5 <= ratio <= 4.5


def test_mesh_2d_rows_are_row_major():
    m = build_mesh_2d(0.1, 1)
    keys = [(z.imag, z.real) for z in m.nodes]
    assert keys == sorted(keys)
    assert np.all(m.nodes.real >= 0) and np.all(m.nodes.imag >= 0)


@given(st.floats(0, 1), st.floats(0, np.pi))
@settings(max_examples=300)
def test_half_disk_corners_are_nodes(r, t):
    m = build_mesh_2d(0.05, 0)
    p = complex(0.5 + 0.5 * r * np.cos(t), 0.5 * r * np.sin(t))
    st_ = interp_weights_2d(m, p)
    assert sum(st_.weights) == pytest.approx(1.0, abs=1e-14)
    assert all(w >= 0 for w in st_.weights)


def test_interp_weights_2d_examples():
    m = build_mesh_2d(0.1, 1)
    st_ = interp_weights_2d(m, 0.3 + 0.2j)
    assert st_.weights == (1.0,) and m.nodes[st_.node_indices[0]] == pytest.approx(0.3 + 0.2j)
    st_ = interp_weights_2d(m, 0.35 + 0.25j)
    assert st_.weights == pytest.approx((0.25,) * 4)
    st_ = interp_weights_2d(m, 0.35 + 0.2j)
    assert st_.weights == pytest.approx((0.5, 0.5))


def test_interp_weights_2d_missing_cell():
    m = build_mesh_2d(0.1, 0)
    with pytest.raises(InvarianceError):
        interp_weights_2d(m, 0.05 + 0.45j)


def test_2d_partition_of_unity_and_bilinear_reproduction():
    rng = np.random.default_rng(1)
    m = build_mesh_2d(0.02, 1)
    r = 0.5 * np.sqrt(rng.uniform(0, 1, 100_000))
    t = rng.uniform(0, np.pi, 100_000)
    w = 0.5 + r * np.cos(t) + 1j * r * np.sin(t)
    corners, wts, q = locate_2d(m, w)
    assert np.max(np.abs(wts.sum(axis=1) - 1)) <= 1e-14
    assert np.all(wts >= 0) and np.all(q >= 0)
    x, y = m.nodes.real, m.nodes.imag
    f = 0.3 + 1.7 * x - 0.9 * y + 2.2 * x * y
    approx = np.sum(wts * f[corners], axis=1)
    exact = 0.3 + 1.7 * w.real - 0.9 * w.imag + 2.2 * w.real * w.imag
    np.testing.assert_allclose(approx[:10_000], exact[:10_000], atol=1e-12)


@pytest.mark.parametrize("kind,R,full", [("I3", None, False), ("I1", 30, False),
                                         ("I2", 30, True)])
def test_images_of_all_nodes_land_in_mesh(kind, R, full):
    m = build_mesh_2d(0.05, 1, full_disk=full)
    b = digits_array(DigitSetSpec(kind), R)
    w = 1.0 / (m.nodes[:, None] + b[None, :])
    if not full:
        w = np.where(w.imag < 0, np.conj(w), w)
    corners, _, _ = locate_2d(m, w)
    assert np.all(corners >= 0)
