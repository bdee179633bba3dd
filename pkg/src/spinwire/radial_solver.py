"""Coupled-channel radial bound-state solver at fixed J_z.

A fixed eigenvalue j_z of J_z = L_z + s_z selects one spinor channel per
magnetic label k: Psi = sum_k psi_k(r) exp(i l_k phi) |s, k> with integer
l_k = j_z - k, which forces two_jz and two_s to share parity. Substituting
u_k = sqrt(r) psi_k reduces p^2/2m + mu(s, n)/|x| to

    -(1/2m) (u_k'' - (l_k^2 - 1/4) u_k / r^2) + alpha_k u_{-k} / r = E u_k,

the angular phases of mu cancelling exactly inside a sector. Channels
therefore couple only in (k, -k) pairs (k = 0 couples to itself), which
makes the discretized operator banded once unknowns are interleaved by
radial node.

The l = 0 channel carries the weakly attractive -1/(4 r^2) centrifugal
term, a borderline case: its regular solution behaves like sqrt(r), and
sampling the coefficient pointwise on a Dirichlet grid then loses
convergence altogether. The centrifugal diagonal is therefore taken from
the discrete second difference evaluated on r^(|l| + 1/2), which matches
(l^2 - 1/4)/(2 m r^2) to O(h^2) at interior nodes while staying exact on
the near-origin behavior. Pair-coupled channels (the generic case) then
converge at close to second order, certified empirically by the
convergence-order tests. A k = 0 channel coupling to itself feeds an
attractive 1/r back into the same channel, whose sqrt(r)(1 + c r) cusp
the stencil does not encode; such integer-spin systems converge at first
order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg
import scipy.sparse

from .interaction import InteractionSpec

__all__ = [
    "RadialGrid",
    "Channel",
    "Sector",
    "SectorHamiltonian",
    "Spectrum",
    "PredictedLevel",
    "Multiplet",
    "DegeneracyReport",
    "build_sector",
    "assemble",
    "solve_bound",
    "default_r_max",
    "default_eps_cont",
    "predicted_spectrum",
    "predicted_energy",
    "degeneracy_report",
]

# minimum grid nodes per interaction length scale 1/(m max|alpha|)
_NODES_PER_SCALE = 10.0

# fixed seed for inverse-iteration start vectors: runs must be reproducible
_INVIT_SEED = 20260814


def _centrifugal_diagonal(ell: int, n: int, h: float, mass: float) -> np.ndarray:
    """Centrifugal diagonal exact on the near-origin power r^(|ell| + 1/2).

    Requiring the tridiagonal row to annihilate r^p samples with
    p = |ell| + 1/2 fixes the diagonal at node i to
    [(1 + 1/i)^p + (1 - 1/i)^p - 2] / (2 m h^2), which equals
    (ell^2 - 1/4)/(2 m r_i^2) + O(h^2 / r_i^4) in the interior.
    """
    i = np.arange(1, n + 1, dtype=float)
    p = abs(ell) + 0.5
    x = 1.0 / i
    c = (1.0 + x) ** p + (1.0 - x) ** p - 2.0
    return c / (2.0 * mass * h * h)


@dataclass(frozen=True)
class RadialGrid:
    """Uniform grid r_i = i h, i = 1..n_points, h = r_max/(n_points + 1).

    Dirichlet values u(0) = u(r_max) = 0 live on the excluded endpoints.
    """

    r_max: float
    n_points: int

    def __post_init__(self) -> None:
        if not (float(self.r_max) > 0.0 and math.isfinite(self.r_max)):
            raise ValueError(f"r_max must be positive and finite, got {self.r_max!r}")
        if not isinstance(self.n_points, (int, np.integer)) or self.n_points < 16:
            raise ValueError(f"n_points must be an integer >= 16, got {self.n_points!r}")

    @property
    def h(self) -> float:
        return self.r_max / (self.n_points + 1)

    @property
    def nodes(self) -> np.ndarray:
        return self.h * np.arange(1, self.n_points + 1)

    def refined(self, factor: float) -> "RadialGrid":
        """Same extent with n_points scaled by factor (rounded)."""
        return RadialGrid(self.r_max, int(round(self.n_points * factor)))


@dataclass(frozen=True)
class Channel:
    two_k: int
    ell: int


@dataclass(frozen=True)
class Sector:
    """All channels sharing one J_z eigenvalue j_z = two_jz / 2."""

    two_s: int
    two_jz: int
    mass: float
    channels: tuple[Channel, ...]

    @property
    def n_channels(self) -> int:
        return len(self.channels)

    def channel_index(self, two_k: int) -> int:
        for i, c in enumerate(self.channels):
            if c.two_k == two_k:
                return i
        raise KeyError(two_k)


def build_sector(spec: InteractionSpec, two_jz: int, mass: float) -> Sector:
    """Enumerate the channels (k, l_k = j_z - k) of one J_z sector."""
    if not isinstance(two_jz, (int, np.integer)):
        raise ValueError(f"two_jz must be an integer, got {two_jz!r}")
    if (two_jz - spec.two_s) % 2 != 0:
        parity = "even" if spec.two_s % 2 == 0 else "odd"
        raise ValueError(
            f"two_jz={two_jz} has wrong parity for two_s={spec.two_s}: "
            f"two_jz must be {parity} so that every l_k = j_z - k is an integer"
        )
    if not (float(mass) > 0.0 and math.isfinite(mass)):
        raise ValueError(f"mass must be positive and finite, got {mass!r}")
    channels = tuple(
        Channel(two_k=two_k, ell=(two_jz - two_k) // 2)
        for two_k in spec.two_k_values
    )
    return Sector(two_s=spec.two_s, two_jz=int(two_jz), mass=float(mass), channels=channels)


@dataclass(frozen=True)
class SectorHamiltonian:
    """Discrete sector operator plus the data needed to solve it.

    matrix is complex hermitian sparse (CSR) in channel-major layout,
    index = channel * n_points + node, with per-channel tridiagonal
    kinetic/centrifugal blocks and radial-diagonal coupling blocks
    alpha_k / r between channels k and -k.
    """

    sector: Sector
    grid: RadialGrid
    spec: InteractionSpec
    matrix: scipy.sparse.csr_matrix

    @property
    def dim(self) -> int:
        return self.sector.n_channels * self.grid.n_points


def default_r_max(spec: InteractionSpec, mass: float) -> float:
    """Box extent 60/(m max|alpha_k|), about seven ground-state radii."""
    amax = spec.max_abs_alpha
    if amax <= 0.0:
        raise ValueError("default_r_max needs at least one nonzero alpha")
    return 60.0 / (float(mass) * amax)


def default_eps_cont(mass: float, r_max: float) -> float:
    """Continuum guard: ~10x the lowest free-box scale 1/(2 m r_max^2)."""
    return 10.0 / (2.0 * float(mass) * float(r_max) ** 2)


def assemble(
    sector: Sector, spec: InteractionSpec, grid: RadialGrid
) -> SectorHamiltonian:
    """Assemble the discrete sector Hamiltonian.

    Rejects non-hermitian specs and grids too coarse to resolve the
    interaction length scale (fewer than 10 nodes per 1/(m max|alpha|)).
    """
    if spec.two_s != sector.two_s:
        raise ValueError(
            f"spec two_s={spec.two_s} does not match sector two_s={sector.two_s}"
        )
    spec.validate()
    amax = spec.max_abs_alpha
    if amax > 0.0:
        scale = 1.0 / (sector.mass * amax)
        if grid.h > scale / _NODES_PER_SCALE:
            raise ValueError(
                f"grid too coarse: h={grid.h:.4g} exceeds {scale / _NODES_PER_SCALE:.4g} "
                f"(need >= {_NODES_PER_SCALE:.0f} nodes per interaction scale "
                f"1/(m max|alpha|) = {scale:.4g})"
            )

    n = grid.n_points
    m = sector.mass
    h = grid.h
    r = grid.nodes
    idx = np.arange(n)

    rows: list[np.ndarray] = []
    cols: list[np.ndarray] = []
    vals: list[np.ndarray] = []

    kin_diag = 1.0 / (m * h * h)
    kin_off = -1.0 / (2.0 * m * h * h)
    for c, ch in enumerate(sector.channels):
        base = c * n
        cent = _centrifugal_diagonal(ch.ell, n, h, m)
        diag = kin_diag + cent
        if ch.two_k == 0:
            # k = 0 pairs with itself: a real alpha_0 / r on the diagonal
            diag = diag + spec.alphas[0].real / r
        rows.append(base + idx)
        cols.append(base + idx)
        vals.append(diag.astype(complex))
        rows.append(base + idx[:-1])
        cols.append(base + idx[1:])
        vals.append(np.full(n - 1, kin_off, dtype=complex))
        rows.append(base + idx[1:])
        cols.append(base + idx[:-1])
        vals.append(np.full(n - 1, kin_off, dtype=complex))

    for ch in sector.channels:
        if ch.two_k <= 0:
            continue
        c_hi = sector.channel_index(ch.two_k)
        c_lo = sector.channel_index(-ch.two_k)
        a = spec.alphas[ch.two_k]
        rows.append(c_hi * n + idx)
        cols.append(c_lo * n + idx)
        vals.append(a / r)
        rows.append(c_lo * n + idx)
        cols.append(c_hi * n + idx)
        vals.append(np.conjugate(a) / r)

    dim = sector.n_channels * n
    mat = scipy.sparse.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(dim, dim),
    ).tocsr()
    return SectorHamiltonian(sector=sector, grid=grid, spec=spec, matrix=mat)


@dataclass(frozen=True)
class Spectrum:
    """Bound levels of one sector, ascending, with unit-norm eigenvectors.

    vectors[i] has shape (n_channels, n_points) in the sector's channel
    order and discrete normalization sum |u|^2 h = 1; the global phase
    makes the largest-magnitude component real positive.
    """

    sector: Sector
    grid: RadialGrid
    energies: np.ndarray
    vectors: np.ndarray
    eps_cont: float

    @property
    def n_levels(self) -> int:
        return len(self.energies)

    def pair_weights(self, level: int) -> dict[int, float]:
        """Probability weight per channel pair, keyed by two_k >= 0."""
        v = self.vectors[level]
        h = self.grid.h
        out: dict[int, float] = {}
        for c, ch in enumerate(self.sector.channels):
            w = float(np.sum(np.abs(v[c]) ** 2)) * h
            out[abs(ch.two_k)] = out.get(abs(ch.two_k), 0.0) + w
        return out


def _banded_form(ham: SectorHamiltonian) -> tuple[np.ndarray, np.ndarray]:
    """Real symmetric lower-band storage of the rephased sector operator.

    Each (k, -k) coupling is made real by rotating channel k's phase by
    arg(alpha_k); unknowns are interleaved radial-node-major so the
    bandwidth equals the channel count. Returns (band, phases).
    """
    sector, grid, spec = ham.sector, ham.grid, ham.spec
    n = grid.n_points
    nc = sector.n_channels
    m = sector.mass
    h = grid.h
    r = grid.nodes
    dim = nc * n

    phases = np.ones(nc, dtype=complex)
    for c, ch in enumerate(sector.channels):
        if ch.two_k > 0:
            a = spec.alphas[ch.two_k]
            if a != 0:
                phases[c] = a / abs(a)

    band = np.zeros((nc + 1, dim))
    kin_diag = 1.0 / (m * h * h)
    kin_off = -1.0 / (2.0 * m * h * h)
    for c, ch in enumerate(sector.channels):
        cols = np.arange(n) * nc + c
        cent = _centrifugal_diagonal(ch.ell, n, h, m)
        band[0, cols] = kin_diag + cent
        if ch.two_k == 0:
            band[0, cols] += spec.alphas[0].real / r
        band[nc, cols[:-1]] = kin_off
    for ch in sector.channels:
        if ch.two_k <= 0:
            continue
        c_hi = sector.channel_index(ch.two_k)
        c_lo = sector.channel_index(-ch.two_k)
        lo, hi = min(c_hi, c_lo), max(c_hi, c_lo)
        cols = np.arange(n) * nc + lo
        band[hi - lo, cols] = abs(spec.alphas[ch.two_k]) / r
    return band, phases


def _general_banded(band: np.ndarray) -> np.ndarray:
    """Expand symmetric lower-band storage to the (2b+1, dim) LU layout."""
    b = band.shape[0] - 1
    dim = band.shape[1]
    ab = np.zeros((2 * b + 1, dim))
    ab[b] = band[0]
    for d in range(1, b + 1):
        ab[b + d, : dim - d] = band[d, : dim - d]
        ab[b - d, d:] = band[d, : dim - d]
    return ab


def _band_matvec(band: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Apply a symmetric matrix in lower-band storage to a vector."""
    b = band.shape[0] - 1
    dim = x.shape[0]
    y = band[0] * x
    for d in range(1, b + 1):
        v = band[d, : dim - d]
        y[: dim - d] += v * x[d:]
        y[d:] += v * x[: dim - d]
    return y


def _eigenvectors_banded(band: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Eigenvectors for precomputed banded eigenvalues by inverse iteration.

    Deterministic throughout: fixed-seed start vectors, shifted banded LU
    solves, Gram-Schmidt inside near-degenerate clusters. Two solves per
    level usually reach residuals near eps * ||A|| because the LAPACK
    eigenvalues are already that accurate; requesting vectors from the
    banded driver instead would accumulate a dense transformation matrix
    at prohibitive cost.
    """
    b = band.shape[0] - 1
    dim = band.shape[1]
    vecs = np.empty((dim, w.shape[0]))
    if w.shape[0] == 0:
        return vecs
    scale = float(max(np.max(np.abs(w)), np.max(np.abs(band[0]))))
    clusters: list[list[int]] = []
    for j in range(w.shape[0]):
        if clusters and abs(w[j] - w[clusters[-1][-1]]) <= 1e-8 * scale:
            clusters[-1].append(j)
        else:
            clusters.append([j])
    rng = np.random.default_rng(_INVIT_SEED)
    for cluster in clusters:
        done: list[np.ndarray] = []
        for j in cluster:
            ab = _general_banded(band)
            ab[b] -= w[j]
            x = rng.standard_normal(dim)
            for attempt in range(8):
                for v in done:
                    x -= v * (v @ x)
                nrm = float(np.linalg.norm(x))
                if nrm == 0.0:  # pragma: no cover - measure-zero restart
                    x = rng.standard_normal(dim)
                    nrm = float(np.linalg.norm(x))
                x /= nrm
                try:
                    x = scipy.linalg.solve_banded((b, b), ab, x)
                except np.linalg.LinAlgError:  # pragma: no cover - singular shift
                    ab[b] += 1e-12 * scale * (attempt + 1)
                    continue
                y = x / float(np.linalg.norm(x))
                if attempt >= 1:
                    res = float(np.linalg.norm(_band_matvec(band, y) - w[j] * y))
                    if res <= 1e-10 * scale:
                        break
            for v in done:
                x -= v * (v @ x)
            x /= float(np.linalg.norm(x))
            done.append(x)
            vecs[:, j] = x
    return vecs


def solve_bound(
    ham: SectorHamiltonian, *, eps_cont: float | None = None
) -> Spectrum:
    """All bound levels (E < -eps_cont) of one sector, with eigenvectors.

    Eigenvalues come from a banded LAPACK solve with range selection,
    complete in the window and O(dim^2 * bandwidth); the handful of bound
    eigenvectors then come from deterministic inverse iteration.
    """
    sector, grid = ham.sector, ham.grid
    if eps_cont is None:
        eps_cont = default_eps_cont(sector.mass, grid.r_max)
    if not (eps_cont > 0.0 and math.isfinite(eps_cont)):
        raise ValueError(f"eps_cont must be positive and finite, got {eps_cont!r}")

    band, phases = _banded_form(ham)
    n = grid.n_points
    nc = sector.n_channels
    dim = nc * n

    # Gershgorin lower bound from the band storage
    radius = np.zeros(dim)
    for d in range(1, nc + 1):
        v = np.abs(band[d, : dim - d])
        radius[: dim - d] += v
        radius[d:] += v
    lower = float(np.min(band[0] - radius)) - 1.0

    try:
        w = scipy.linalg.eig_banded(
            band,
            lower=True,
            eigvals_only=True,
            select="v",
            select_range=(lower, -float(eps_cont)),
        )
    except scipy.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise RuntimeError(
            f"banded eigensolver failed on sector two_jz={sector.two_jz} "
            f"(matrix dim {dim}, bandwidth {nc}): {exc}"
        ) from exc
    v = _eigenvectors_banded(band, w)

    n_found = w.shape[0]
    vectors = np.zeros((n_found, nc, n), dtype=complex)
    scale = 1.0 / math.sqrt(grid.h)
    for i in range(n_found):
        # undo interleaving and channel phases; l2 -> discrete norm
        u = v[:, i].reshape(n, nc).T.astype(complex)
        u *= phases[:, None] * scale
        flat = np.abs(u).ravel()
        j = int(np.argmax(flat))
        z = u.ravel()[j]
        if flat[j] > 0.0:
            u *= np.conjugate(z) / flat[j]
        vectors[i] = u

    energies = w.astype(float)
    energies.setflags(write=False)
    vectors.setflags(write=False)
    return Spectrum(
        sector=sector,
        grid=grid,
        energies=energies,
        vectors=vectors,
        eps_cont=float(eps_cont),
    )


def predicted_energy(mass: float, abs_alpha: float, two_j: int) -> float:
    """Closed-form level: E = -(m/2) |alpha_k|^2 / (j + 1/2)^2."""
    return -2.0 * float(mass) * float(abs_alpha) ** 2 / float(two_j + 1) ** 2


@dataclass(frozen=True)
class PredictedLevel:
    two_k: int
    two_j: int
    energy: float


def predicted_spectrum(
    spec: InteractionSpec, mass: float, two_j_values: Sequence[int]
) -> tuple[PredictedLevel, ...]:
    """Closed-form table over channel pairs and requested j values.

    Rows are emitted per two_k >= 0 with nonzero alpha (|alpha_k| is the
    only thing that enters) and per requested two_j, which must share the
    spin's parity and be nonnegative.
    """
    spec.validate()
    parity = spec.two_s % 2
    rows: list[PredictedLevel] = []
    for two_j in two_j_values:
        if not isinstance(two_j, (int, np.integer)) or two_j < 0 or two_j % 2 != parity:
            allowed = "even" if parity == 0 else "odd"
            raise ValueError(
                f"two_j={two_j!r} invalid: must be a nonnegative {allowed} integer "
                f"for two_s={spec.two_s}"
            )
    for two_k in spec.two_k_values:
        if two_k < 0 or abs(spec.alphas[two_k]) == 0.0:
            continue
        for two_j in sorted(int(j) for j in two_j_values):
            rows.append(
                PredictedLevel(
                    two_k=two_k,
                    two_j=two_j,
                    energy=predicted_energy(mass, abs(spec.alphas[two_k]), two_j),
                )
            )
    return tuple(rows)


@dataclass(frozen=True)
class Multiplet:
    """One energy cluster across sectors.

    members are (two_jz, level_index, energy) sorted by two_jz. The
    multiplet is consistent when its sectors form exactly {-a, ..., a}
    with one state each, the 2j + 1 pattern; then inferred_two_j = a.
    Any other multiplicity is flagged via consistent=False, not an error.
    truncated marks clusters touching the scanned sector-range edge (the
    inferred j is then only a lower bound). Channel attribution comes from
    eigenvector pair weights and is None when the two leading weights are
    within 1% of each other (reported ambiguous).
    """

    members: tuple[tuple[int, int, float], ...]
    mean_energy: float
    spread_rel: float
    inferred_two_j: int | None
    consistent: bool
    truncated: bool
    channel_two_k: int | None
    channel_ambiguous: bool
    pair_weights: tuple[tuple[int, float], ...]
    matched_two_k: int | None
    predicted: float | None
    rel_err: float | None

    @property
    def multiplicity(self) -> int:
        return len(self.members)

    @property
    def sectors(self) -> tuple[int, ...]:
        return tuple(m[0] for m in self.members)

    def level_rel_err(self, energy: float) -> float | None:
        """Relative error of one member energy against the matched prediction."""
        if self.predicted is None:
            return None
        return abs(energy - self.predicted) / abs(self.predicted)


@dataclass(frozen=True)
class DegeneracyReport:
    two_s: int
    mass: float
    rel_tol: float
    scanned_two_jz: tuple[int, ...]
    multiplets: tuple[Multiplet, ...]

    @property
    def n_consistent(self) -> int:
        return sum(1 for m in self.multiplets if m.consistent)


def _match_prediction(
    spec: InteractionSpec, mass: float, energy: float, two_j: int
) -> tuple[int | None, float | None, float | None]:
    best: tuple[int | None, float | None, float | None] = (None, None, None)
    best_err = math.inf
    for two_k in spec.two_k_values:
        if two_k < 0 or abs(spec.alphas[two_k]) == 0.0:
            continue
        pred = predicted_energy(mass, abs(spec.alphas[two_k]), two_j)
        err = abs(energy - pred) / abs(pred)
        if err < best_err:
            best_err = err
            best = (two_k, pred, err)
    return best


def degeneracy_report(
    spectra: Sequence[Spectrum],
    spec: InteractionSpec,
    *,
    rel_tol: float = 2e-3,
) -> DegeneracyReport:
    """Cluster bound levels across sectors into candidate multiplets.

    All spectra must share the grid, mass, and spin; sectors must be
    distinct. Clustering is greedy on the energy-sorted list with a purely
    relative gap tolerance, so near-coincident towers from tied |alpha_k|
    merge by energy (their channel attribution is then ambiguous).
    """
    if not spectra:
        raise ValueError("need at least one sector spectrum")
    g0 = spectra[0].grid
    m0 = spectra[0].sector.mass
    seen: set[int] = set()
    for sp in spectra:
        if sp.sector.two_s != spec.two_s:
            raise ValueError("spectra and spec disagree on two_s")
        if (sp.grid.r_max, sp.grid.n_points) != (g0.r_max, g0.n_points):
            raise ValueError("all spectra must share one radial grid")
        if sp.sector.mass != m0:
            raise ValueError("all spectra must share one mass")
        if sp.sector.two_jz in seen:
            raise ValueError(f"duplicate sector two_jz={sp.sector.two_jz}")
        seen.add(sp.sector.two_jz)
    if not (rel_tol > 0.0 and math.isfinite(rel_tol)):
        raise ValueError(f"rel_tol must be positive and finite, got {rel_tol!r}")

    scanned = tuple(sorted(seen))
    levels: list[tuple[float, int, int, dict[int, float]]] = []
    for sp in spectra:
        for i, e in enumerate(sp.energies):
            levels.append((float(e), sp.sector.two_jz, i, sp.pair_weights(i)))
    levels.sort(key=lambda t: (t[0], t[1], t[2]))

    clusters: list[list[tuple[float, int, int, dict[int, float]]]] = []
    for item in levels:
        if clusters and abs(item[0] - clusters[-1][-1][0]) <= rel_tol * abs(
            clusters[-1][-1][0]
        ):
            clusters[-1].append(item)
        else:
            clusters.append([item])

    multiplets: list[Multiplet] = []
    for cl in clusters:
        energies = np.array([c[0] for c in cl])
        mean = float(np.mean(energies))
        spread = float((np.max(energies) - np.min(energies)) / abs(mean))
        members = tuple(sorted((c[1], c[2], c[0]) for c in cl))
        sector_list = [m[0] for m in members]
        a = max(abs(s) for s in sector_list)
        full_range = list(range(-a, a + 1, 2)) if a > 0 else [0]
        consistent = sector_list == full_range
        inferred = a if consistent else None
        truncated = (min(sector_list) == min(scanned)) or (
            max(sector_list) == max(scanned)
        )

        weights: dict[int, float] = {}
        for c in cl:
            for two_k, w in c[3].items():
                weights[two_k] = weights.get(two_k, 0.0) + w
        total = sum(weights.values())
        pair_weights = tuple(
            sorted((two_k, w / total) for two_k, w in weights.items())
        )
        ranked = sorted(pair_weights, key=lambda t: (-t[1], t[0]))
        if len(ranked) > 1 and ranked[0][1] - ranked[1][1] < 0.01 * ranked[0][1]:
            channel_two_k, ambiguous = None, True
        else:
            channel_two_k, ambiguous = ranked[0][0], False

        if inferred is not None:
            matched_two_k, predicted, rel_err = _match_prediction(
                spec, m0, mean, inferred
            )
        else:
            matched_two_k, predicted, rel_err = None, None, None

        multiplets.append(
            Multiplet(
                members=members,
                mean_energy=mean,
                spread_rel=spread,
                inferred_two_j=inferred,
                consistent=consistent,
                truncated=truncated,
                channel_two_k=channel_two_k,
                channel_ambiguous=ambiguous,
                pair_weights=pair_weights,
                matched_two_k=matched_two_k,
                predicted=predicted,
                rel_err=rel_err,
            )
        )

    multiplets.sort(key=lambda m: m.mean_energy)
    return DegeneracyReport(
        two_s=spec.two_s,
        mass=m0,
        rel_tol=float(rel_tol),
        scanned_two_jz=scanned,
        multiplets=tuple(multiplets),
    )
