import numpy as np
import pytest

import spinwire as sw
from spinwire.operator_lattice import _tail_taper

PACKET = sw.PacketRecipe(
    center=(4.6, 3.4),
    width=0.75,
    mean_momentum=(0.7, -0.4),
    spin_weights=(1.0, 1.0),
)


@pytest.fixture(scope="module")
def cheap_spectra(dipole_spec):
    """Sectors two_jz = +-1 on a coarse radial grid, plus ground multiplet."""
    grid = sw.RadialGrid(60.0, 800)
    spectra = []
    for two_jz in (-1, 1):
        sector = sw.build_sector(dipole_spec, two_jz, 1.0)
        spectra.append(sw.solve_bound(sw.assemble(sector, dipole_spec, grid)))
    report = sw.degeneracy_report(spectra, dipole_spec, rel_tol=2e-2)
    ground = min(report.multiplets, key=lambda m: m.mean_energy)
    return spectra, ground


def test_plane_grid_geometry():
    grid = sw.PlaneGrid(12.0, 96)
    assert grid.spacing == pytest.approx(24.0 / 95.0)
    assert grid.axis[0] == -12.0 and grid.axis[-1] == 12.0
    assert grid.rr.min() > 0.0  # origin stays off the grid
    fine = grid.refined(1.5)
    assert fine.half_extent == 12.0
    assert fine.n % 2 == 0 and fine.n >= 96
    assert fine.spacing <= grid.spacing / 1.49


def test_plane_grid_rejections():
    with pytest.raises(ValueError):
        sw.PlaneGrid(-1.0, 96)
    with pytest.raises(ValueError):
        sw.PlaneGrid(12.0, 16)
    with pytest.raises(ValueError):
        sw.PlaneGrid(12.0, 97)  # odd n would put a node at the origin


def test_packet_normalization_and_spin_structure():
    grid = sw.PlaneGrid(12.0, 96)
    psi = PACKET.build(grid)
    assert psi.norm() == pytest.approx(1.0, abs=1e-12)
    assert psi.two_s == 1
    np.testing.assert_allclose(psi.values[0], psi.values[1])


def test_packet_clearance_rejections():
    grid = sw.PlaneGrid(12.0, 96)
    with pytest.raises(ValueError):  # too close to the origin
        sw.make_gaussian_packet((1.0, 1.0), 0.75, (0.0, 0.0), (1.0,), grid)
    with pytest.raises(ValueError):  # too close to the wall
        sw.make_gaussian_packet((11.5, 0.0), 0.75, (0.0, 0.0), (1.0,), grid)
    with pytest.raises(ValueError):
        sw.make_gaussian_packet((4.6, 3.4), 0.75, (0.0, 0.0), (0.0, 0.0), grid)
    with pytest.raises(ValueError):
        sw.make_gaussian_packet((4.6, 3.4), -0.5, (0.0, 0.0), (1.0,), grid)


def test_field_shape_and_grid_mismatch():
    grid = sw.PlaneGrid(12.0, 96)
    with pytest.raises(ValueError):
        sw.SpinorField(grid, 1, np.zeros((1, 96, 96), dtype=complex))
    a = PACKET.build(grid)
    b = PACKET.build(sw.PlaneGrid(12.0, 128))
    with pytest.raises(ValueError):
        a.inner(b)
    with pytest.raises(ValueError):
        _ = a + b


def _order(ns, err_fn):
    errs = [err_fn(sw.PlaneGrid(12.0, n)) for n in ns]
    spacings = [sw.PlaneGrid(12.0, n).spacing for n in ns]
    return errs, float(np.polyfit(np.log(spacings), np.log(errs), 1)[0])


def test_momentum_stencil_matches_analytic_gaussian():
    cx, w, px = 4.6, 0.75, 0.7

    def err(grid):
        psi = PACKET.build(grid)
        num = sw.apply_p(psi, "x")
        analytic = (px + 0.5j * (grid.xx - cx) / w**2)[None] * psi.values
        return np.linalg.norm(num.values - analytic) / np.linalg.norm(analytic)

    errs, order = _order((96, 144, 216), err)
    assert errs[-1] < 1e-2
    assert 1.8 <= order <= 2.2


def test_jz_stencil_matches_analytic_gaussian():
    cx, cy, w, px, py = 4.6, 3.4, 0.75, 0.7, -0.4

    def err(grid):
        psi = PACKET.build(grid)
        num = sw.apply_Jz(psi)
        dx = -(grid.xx - cx) / (2 * w**2) + 1j * px
        dy = -(grid.yy - cy) / (2 * w**2) + 1j * py
        lz = -1j * (grid.xx * dy - grid.yy * dx)
        k_vals = np.array([0.5, -0.5])
        analytic = (lz[None] + k_vals[:, None, None]) * psi.values
        return np.linalg.norm(num.values - analytic) / np.linalg.norm(analytic)

    errs, order = _order((96, 144, 216), err)
    assert errs[-1] < 1e-2
    assert 1.8 <= order <= 2.2


def test_apply_p_rejects_unknown_axis():
    psi = PACKET.build(sw.PlaneGrid(12.0, 96))
    with pytest.raises(ValueError):
        sw.apply_p(psi, "z")


def test_operators_are_discretely_hermitian(dipole_spec, rng):
    grid = sw.PlaneGrid(8.0, 48)
    shape = (2, 48, 48)

    def random_field():
        return sw.SpinorField(
            grid, 1, rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
        )

    f, g = random_field(), random_field()
    for op in (
        lambda x: sw.apply_H(x, dipole_spec, 1.3),
        lambda x: sw.apply_A(x, "x", dipole_spec, 1.3),
        lambda x: sw.apply_A(x, "y", dipole_spec, 1.3),
        sw.apply_Jz,
        lambda x: sw.apply_p(x, "x"),
    ):
        lhs = f.inner(op(g))
        rhs = op(f).inner(g)
        assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-10)


def test_spin_mismatch_rejected(dipole_spec):
    grid = sw.PlaneGrid(12.0, 96)
    scalar = sw.make_gaussian_packet((4.6, 3.4), 0.75, (0.0, 0.0), (1.0,), grid)
    with pytest.raises(ValueError):
        sw.apply_H(scalar, dipole_spec, 1.0)
    with pytest.raises(ValueError):
        sw.apply_A(scalar, "x", dipole_spec, 1.0)


def test_commutator_residual_argument_validation(dipole_spec):
    grids = [sw.PlaneGrid(12.0, n) for n in (96, 144, 216)]
    with pytest.raises(ValueError):
        sw.commutator_residual("Ax,Jz", dipole_spec, 1.0, PACKET, grids)
    with pytest.raises(ValueError):
        sw.commutator_residual("Jz,H", dipole_spec, 1.0, PACKET, grids[:2])
    with pytest.raises(ValueError):
        sw.commutator_residual("Jz,H", dipole_spec, 1.0, PACKET, grids[::-1])


def test_true_identity_converges_at_stencil_order(dipole_spec):
    grids = [sw.PlaneGrid(12.0, n) for n in (96, 144, 216)]
    report = sw.commutator_residual("Jz,H", dipole_spec, 1.0, PACKET, grids)
    assert report.verdict
    assert 1.8 <= report.order <= 2.2
    assert all(a > b for a, b in zip(report.residuals, report.residuals[1:]))
    assert report.relative_residuals[-1] < 1e-3
    assert report.fitted_constant is None


def test_sabotaged_interactions_leave_residual_floor(dipole_spec):
    grids = [sw.PlaneGrid(12.0, n) for n in (192, 288, 416)]
    shifted = sw.commutator_residual(
        "Ax,H", dipole_spec, 1.0, PACKET, grids, spin_diagonal_shift=3.0
    )
    assert not shifted.verdict
    assert shifted.order < 0.5
    scaled = sw.commutator_residual(
        "Ax,H", dipole_spec, 1.0, PACKET, grids, homogeneity_exponent=1.2
    )
    assert not scaled.verdict
    assert scaled.order < 0.5


def test_fitted_commutator_constant_near_2m(dipole_spec):
    psi = PACKET.build(sw.PlaneGrid(12.0, 320))
    c, _res = sw.fit_commutator_constant(psi, dipole_spec, 1.0)
    assert c == pytest.approx(2.0, abs=0.1)
    c2, _res = sw.fit_commutator_constant(psi, dipole_spec, 2.0)
    assert c2 == pytest.approx(4.0, abs=0.2)


def test_tail_taper_window():
    rr = np.linspace(0.0, 10.0, 401)
    w = _tail_taper(rr, 10.0)
    assert np.all(w[rr <= 8.0] == 1.0)
    assert np.all(w[rr >= 9.4] == 0.0)
    assert np.all(np.diff(w) <= 1e-12)  # monotone rolloff
    assert np.all((w >= 0.0) & (w <= 1.0))


def test_lift_is_normalized_and_tapered(cheap_spectra, dipole_spec):
    spectra, _ = cheap_spectra
    grid = sw.PlaneGrid(12.0, 256)
    psi = sw.lift_to_plane(spectra[1], 0, grid)
    assert psi.norm() == pytest.approx(1.0, abs=1e-12)
    assert np.all(psi.values[:, grid.rr >= 0.95 * 12.0] == 0.0)

    energy = spectra[1].energies[0]
    rayleigh = psi.inner(sw.apply_H(psi, dipole_spec, 1.0)).real
    assert abs(rayleigh - energy) < 0.05 * abs(energy)
    jz = psi.inner(sw.apply_Jz(psi)).real
    assert jz == pytest.approx(0.5, abs=0.02)


def test_ladder_grid_sizing():
    base = sw.PlaneGrid(12.0, 384)
    assert sw.ladder_grid(-0.5, 1.0, base) is base  # kappa L already 12
    assert sw.ladder_grid(-2.0, 1.0, base) is base
    stretched = sw.ladder_grid(-0.125, 1.0, base)
    assert stretched.half_extent == pytest.approx(24.0)
    assert stretched.spacing == pytest.approx(base.spacing, rel=0.01)
    with pytest.raises(ValueError):
        sw.ladder_grid(0.25, 1.0, base)


def test_ladder_check_raises_and_lands(cheap_spectra, dipole_spec):
    spectra, ground = cheap_spectra
    report = sw.ladder_check(
        spectra, dipole_spec, 1.0, ground, grid=sw.PlaneGrid(12.0, 256)
    )
    assert report.inferred_two_j == 1
    assert [s.two_jz_from for s in report.steps] == [-1, 1]

    up, top = report.steps
    assert up.two_jz_to == 1
    assert up.overlap > 0.995  # raising lands on the partner state
    assert up.leakage == pytest.approx(1.0 - up.overlap)
    assert top.two_jz_to is None and top.overlap is None
    assert top.norm_ratio < 0.15  # raising the top member annihilates


def test_ladder_and_casimir_reject_bad_multiplets(cheap_spectra, dipole_spec):
    spectra, ground = cheap_spectra
    broken = sw.Multiplet(
        members=((1, 0, -0.5),),
        mean_energy=-0.5,
        spread_rel=0.0,
        inferred_two_j=None,
        consistent=False,
        truncated=False,
        channel_two_k=None,
        channel_ambiguous=False,
        pair_weights=((1, 1.0),),
        matched_two_k=None,
        predicted=None,
        rel_err=None,
    )
    with pytest.raises(ValueError):
        sw.ladder_check(spectra, dipole_spec, 1.0, broken, grid=sw.PlaneGrid(12.0, 64))
    with pytest.raises(ValueError):
        sw.casimir_check(broken, dipole_spec, 1.0)
    with pytest.raises(ValueError):  # multiplet member without a spectrum
        sw.ladder_check(
            spectra[:1], dipole_spec, 1.0, ground, grid=sw.PlaneGrid(12.0, 64)
        )


def test_casimir_relation_on_ground_multiplet(cheap_spectra, dipole_spec):
    _, ground = cheap_spectra
    report = sw.casimir_check(ground, dipole_spec, 1.0)
    assert report.two_j == 1
    assert report.lhs == pytest.approx(0.75)
    assert report.rel_dev < 1e-2
