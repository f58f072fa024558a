"""Photon-by-photon stochastic simulation of the interferometer experiment.

Detector counts are multinomial draws over the analytic probabilities from
`interferometer`; estimators mirror the measurement procedures of the
experiment (which-way likelihood from blocked-path count rates, fringe
visibility from a phase scan, Stokes tomography) and carry nonparametric
bootstrap confidence intervals.

Randomness policy: every stream is a counter-based Philox generator keyed by
(seed, stream_id), so identical inputs reproduce identical counts bit for bit
on every platform. Count "rates" are treated as counts per fixed exposure;
the total photon number per setting is conditioned on, not Poisson-fluctuated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np

from . import duality, interferometer, polarization
from .errors import EmptyCounts, InvalidState

RNG_ALGORITHM = "philox4x64"

DEFAULT_RESAMPLES = 2000


@dataclass(frozen=True)
class RngStream:
    """Pinned counter-based random stream: (seed, stream_id) -> Philox."""

    seed: int
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        return make_rng(self.seed, self.stream_id)


def make_rng(seed: int, stream_id: int = 0) -> np.random.Generator:
    return np.random.Generator(
        np.random.Philox(np.random.SeedSequence((int(seed), int(stream_id))))
    )


@dataclass(frozen=True)
class CountRecord:
    """Detector counts N[p][d] by open path p in {0, 1} and detector d in
    {APD10, APD11}; photons injected per setting is recorded so that the
    undetected remainder (blocked arm, other port) is implied."""

    counts: np.ndarray
    photons_per_setting: int

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=np.int64)
        if counts.shape != (2, 2) or np.any(counts < 0):
            raise InvalidState("counts must be a nonnegative 2x2 table")
        if np.any(counts.sum(axis=1) > self.photons_per_setting):
            raise InvalidState("detected counts exceed photons injected")
        object.__setattr__(self, "counts", counts)


@dataclass(frozen=True)
class EstimateWithCI:
    value: float
    ci_low: float
    ci_high: float
    level: float = 0.95

    def __post_init__(self):
        if not (self.ci_low <= self.value <= self.ci_high):
            raise InvalidState(
                f"confidence interval [{self.ci_low}, {self.ci_high}] "
                f"does not bracket the estimate {self.value}")

    @property
    def sigma(self) -> float:
        """Gaussian-equivalent standard error from the CI half width."""
        from scipy.stats import norm

        z = norm.ppf(0.5 + self.level / 2.0)
        return 0.5 * (self.ci_high - self.ci_low) / z


def _percentile_ci(samples, value, level):
    lo_q = 100.0 * (0.5 - level / 2.0)
    hi_q = 100.0 * (0.5 + level / 2.0)
    lo, hi = np.percentile(samples, [lo_q, hi_q])
    # the percentile interval must bracket the plug-in estimate
    return float(min(lo, value)), float(max(hi, value))


def sample_counts(probabilities, photons: int, rng: np.random.Generator) -> np.ndarray:
    """Multinomial photon counting over a probability vector.

    Probabilities may sum to less than one; the remainder is an implicit
    "undetected" bin whose count is discarded. Equivalent to one draw per
    photon, and deterministic given the generator state.
    """
    if photons < 1:
        raise InvalidState("need at least one photon")
    p = np.asarray(probabilities, dtype=float)
    if np.any(p < -1e-12) or p.sum() > 1.0 + 1e-9:
        raise InvalidState(f"invalid probability vector {p}")
    p = np.clip(p, 0.0, 1.0)
    rest = max(0.0, 1.0 - p.sum())
    full = np.concatenate([p, [rest]])
    full /= full.sum()
    draw = rng.multinomial(photons, full)
    return draw[:-1]


def optimal_whichway_analyzer(cfg: interferometer.InterferometerConfig,
                              branch_input) -> interferometer.AnalyzerSetting:
    """Analyzer setting (QWP at 0) that maximizes the which-way likelihood
    for a given pure branch input.

    Derived from the model itself: the optimal projective basis is the
    eigenbasis of the difference of the two path-conditional output states,
    which for linear-polarization inputs stays linear; the half-wave plate is
    set to half the basis angle. For the H / V branches at theta0 = 0 this
    lands at 22.5 + theta1/2 degrees modulo 45 (an offset of 45 only swaps
    the two detector labels).
    """
    rho = polarization.as_density(branch_input)
    _, r0 = interferometer.conditional_output(cfg, rho, open_path=0, port=1)
    _, r1 = interferometer.conditional_output(cfg, rho, open_path=1, port=1)
    diff = polarization.stokes_from_density(r0) - polarization.stokes_from_density(r1)
    if np.linalg.norm(diff) < 1e-12:
        # indistinguishable branches: any basis is equally (non-)informative
        return interferometer.AnalyzerSetting(hwp_angle_deg=0.0, qwp_angle_deg=0.0)
    if abs(diff[1]) > 1e-9 * np.linalg.norm(diff):
        raise InvalidState("optimal basis is not linear; a QWP offset would be needed")
    basis_angle = 0.5 * math.degrees(math.atan2(diff[0], diff[2]))
    return interferometer.AnalyzerSetting(hwp_angle_deg=basis_angle / 2.0,
                                          qwp_angle_deg=0.0)


def which_way_counts(cfg: interferometer.InterferometerConfig, rho_in,
                     analyzer: interferometer.AnalyzerSetting, photons: int,
                     rng: np.random.Generator) -> CountRecord:
    """Simulate the blocked-path likelihood measurement: for each open path,
    inject `photons` and count the two port-1 analyzer outputs."""
    rho = polarization.as_density(rho_in)
    counts = np.zeros((2, 2), dtype=np.int64)
    for open_path in (0, 1):
        prob, rho_out = interferometer.conditional_output(cfg, rho, open_path, port=1)
        p10 = prob * interferometer.analyzer_probability(rho_out, analyzer, "transmit")
        p11 = prob * interferometer.analyzer_probability(rho_out, analyzer, "reflect")
        counts[open_path] = sample_counts([p10, p11], photons, rng)
    return CountRecord(counts=counts, photons_per_setting=photons)


def likelihood_point_estimate(record: CountRecord) -> float:
    n = record.counts
    total = int(n.sum())
    if total == 0:
        raise EmptyCounts("no detected photons in the likelihood table")
    return float((max(n[0, 0], n[1, 0]) + max(n[0, 1], n[1, 1])) / total)


def _bootstrap_likelihood(record: CountRecord, resamples: int,
                          rng: np.random.Generator) -> np.ndarray:
    """Resampled likelihood values.

    Each open-path setting is redrawn photon by photon over its three
    empirical outcomes (APD10, APD11, undetected), so the resamples carry the
    fluctuation of the detected totals as well as of the detector split.
    """
    n = record.counts
    photons = record.photons_per_setting
    resampled = np.zeros((resamples, 2, 2), dtype=np.int64)
    for p in range(2):
        pvals = np.array([n[p, 0], n[p, 1],
                          photons - n[p, 0] - n[p, 1]], dtype=float) / photons
        draw = rng.multinomial(photons, pvals, size=resamples)
        resampled[:, p, :] = draw[:, :2]
    total = resampled.sum(axis=(1, 2))
    total = np.maximum(total, 1)  # guard an (improbable) all-undetected resample
    num = (np.maximum(resampled[:, 0, 0], resampled[:, 1, 0])
           + np.maximum(resampled[:, 0, 1], resampled[:, 1, 1]))
    return num / total


def estimate_likelihood(record: CountRecord, resamples: int = DEFAULT_RESAMPLES,
                        rng: Optional[np.random.Generator] = None,
                        level: float = 0.95) -> EstimateWithCI:
    """Plug-in which-way likelihood with a nonparametric bootstrap CI."""
    value = likelihood_point_estimate(record)
    if rng is None:
        rng = make_rng(0, 0xB007)
    samples = _bootstrap_likelihood(record, resamples, rng)
    lo, hi = _percentile_ci(samples, value, level)
    return EstimateWithCI(value=value, ci_low=lo, ci_high=hi, level=level)


@dataclass(frozen=True)
class DistinguishabilityRun:
    """Result of the decomposition-based D measurement."""

    estimate: EstimateWithCI
    branch_records: Dict[str, CountRecord] = field(repr=False, default=None)
    branch_likelihoods: Dict[str, float] = None
    analyzers: Dict[str, interferometer.AnalyzerSetting] = None


_BRANCH_INPUTS = {
    "alpha": np.diag([1.0, 0.0]).astype(complex),  # |H>, Stokes (0, 0, +1)
    "beta": np.diag([0.0, 1.0]).astype(complex),   # |V>, Stokes (0, 0, -1)
}


def estimate_distinguishability_decomposed(
        cfg: interferometer.InterferometerConfig, source_s, photons_per_branch: int,
        rng: np.random.Generator, resamples: int = DEFAULT_RESAMPLES,
        level: float = 0.95) -> DistinguishabilityRun:
    """Decomposition estimator for the generalized distinguishability.

    The source (assumed s ~ (0, 0, s3)) is split into the H / V pure
    branches with weights (1 +- s3) / 2; each branch runs the blocked-path
    likelihood measurement at its model-optimal analyzer, and
    D = p_a (2 L_a - 1) + p_b (2 L_b - 1). The CI propagates the two
    bootstrap resamples through the same combination.
    """
    s = polarization.as_stokes(source_s)
    weights = {"alpha": 0.5 * (1.0 + s[2]), "beta": 0.5 * (1.0 - s[2])}
    records, likelihoods, analyzers, boots = {}, {}, {}, {}
    for branch, rho_branch in _BRANCH_INPUTS.items():
        analyzer = optimal_whichway_analyzer(cfg, rho_branch)
        record = which_way_counts(cfg, rho_branch, analyzer, photons_per_branch, rng)
        records[branch] = record
        analyzers[branch] = analyzer
        likelihoods[branch] = likelihood_point_estimate(record)
        boots[branch] = _bootstrap_likelihood(record, resamples, rng)
    value = sum(weights[b] * (2.0 * likelihoods[b] - 1.0) for b in weights)
    samples = sum(weights[b] * (2.0 * boots[b] - 1.0) for b in weights)
    lo, hi = _percentile_ci(samples, value, level)
    return DistinguishabilityRun(
        estimate=EstimateWithCI(value=float(value), ci_low=lo, ci_high=hi, level=level),
        branch_records=records, branch_likelihoods=likelihoods, analyzers=analyzers)


def estimate_visibility_mc(cfg: interferometer.InterferometerConfig, rho_in,
                           phi_grid, photons_per_point: int,
                           rng: np.random.Generator,
                           resamples: int = DEFAULT_RESAMPLES,
                           level: float = 0.95) -> EstimateWithCI:
    """Fringe visibility from binomially sampled port-1 rates on a phase grid.

    The Fourier-quotient estimator has a positive bias floor of about
    sqrt(pi / (N K)) at zero true visibility (|complex noise sum| is Rayleigh
    distributed); the CI comes from a parametric per-point bootstrap.
    """
    phi = np.asarray(phi_grid, dtype=float)
    if phi.size < 8:
        raise InvalidState("need at least 8 phase points")
    rho = polarization.as_density(rho_in)
    truth = np.clip([
        interferometer.output_probability(cfg.with_phase(float(f)), rho, 1)
        for f in phi
    ], 0.0, 1.0)
    n1 = rng.binomial(photons_per_point, truth)
    rates = n1 / photons_per_point
    value, _ = interferometer.fit_visibility(phi, rates)
    resampled = rng.binomial(photons_per_point, rates,
                             size=(resamples, phi.size)) / photons_per_point
    quot = np.abs((resampled * np.exp(-1j * phi)).sum(axis=1))
    v_samples = 2.0 * quot / resampled.sum(axis=1)
    lo, hi = _percentile_ci(v_samples, value, level)
    return EstimateWithCI(value=float(value), ci_low=lo, ci_high=hi, level=level)


_PAULI_EIGENBASES = {
    # projector pairs (plus, minus) for each Stokes component
    "s1": (polarization.density_from_stokes([1, 0, 0]),
           polarization.density_from_stokes([-1, 0, 0])),
    "s2": (polarization.density_from_stokes([0, 1, 0]),
           polarization.density_from_stokes([0, -1, 0])),
    "s3": (polarization.density_from_stokes([0, 0, 1]),
           polarization.density_from_stokes([0, 0, -1])),
}


@dataclass(frozen=True)
class TomographyRun:
    stokes_estimate: np.ndarray
    fidelity_unpolarized: EstimateWithCI
    counts_plus: np.ndarray
    photons_per_basis: int


def tomography(rho_source, photons_per_basis: int, rng: np.random.Generator,
               resamples: int = DEFAULT_RESAMPLES, level: float = 0.95) -> TomographyRun:
    """Three-basis Stokes tomography of the source.

    Each Pauli basis gets `photons_per_basis` photons; s_k is the normalized
    count difference. Estimates with |s| > 1 are rescaled onto the Bloch
    sphere before the fidelity to the unpolarized state is formed.
    """
    if photons_per_basis < 1:
        raise InvalidState("need at least one photon per basis")
    rho = polarization.as_density(rho_source)
    s_true = polarization.stokes_from_density(rho)
    p_plus = (1.0 + s_true) / 2.0
    n_plus = rng.binomial(photons_per_basis, p_plus)
    s_hat = 2.0 * n_plus / photons_per_basis - 1.0
    unpolarized = 0.5 * np.eye(2, dtype=complex)

    def fid(s_vec):
        rho_hat = polarization.density_from_stokes(polarization.clip_stokes(s_vec))
        return polarization.fidelity(rho_hat, unpolarized)

    value = fid(s_hat)
    resamp = rng.binomial(photons_per_basis,
                          np.clip((1.0 + s_hat) / 2.0, 0.0, 1.0),
                          size=(resamples, 3))
    s_resamp = 2.0 * resamp / photons_per_basis - 1.0
    f_samples = np.array([fid(sv) for sv in s_resamp])
    lo, hi = _percentile_ci(f_samples, value, level)
    return TomographyRun(
        stokes_estimate=s_hat,
        fidelity_unpolarized=EstimateWithCI(value=float(value), ci_low=lo,
                                            ci_high=hi, level=level),
        counts_plus=n_plus,
        photons_per_basis=photons_per_basis,
    )


def visibility_truth(cfg: interferometer.InterferometerConfig, s) -> float:
    return duality.visibility_stokes(duality.rotation_from_config(cfg), s)


def distinguishability_truth(cfg: interferometer.InterferometerConfig, s) -> float:
    return duality.d_general(duality.rotation_from_config(cfg), s)
