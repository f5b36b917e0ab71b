"""Mach-Zehnder path-spin interferometer: state preparation, Born sampling, count estimators."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from . import qcore
from .qrac import MeasurementBases, default_bases


@dataclass(frozen=True)
class InterferometerConfig:
    """Apparatus parameters: splitter amplitudes, preparation phase, analyzer settings.

    ``transmission`` and ``reflection`` are the real amplitudes of the first
    beamsplitter (squares sum to 1); ``prep_phase`` is the phase shifter in the
    reflected arm. ``analyzer_angle``/``analyzer_phase`` set the recombining
    beamsplitter-plus-phase stage and ``spin_axis`` the spin analyzer.
    """

    transmission: float
    reflection: float
    prep_phase: float
    analyzer_angle: float = 0.0
    analyzer_phase: float = 0.0
    spin_axis: np.ndarray = None  # type: ignore[assignment]

    def __post_init__(self):
        if abs(self.transmission**2 + self.reflection**2 - 1.0) > qcore.ATOL:
            raise ValueError("transmission^2 + reflection^2 must equal 1")
        axis = qcore.Z_AXIS if self.spin_axis is None else qcore.require_unit(self.spin_axis)
        object.__setattr__(self, "spin_axis", axis)

    def state(self) -> qcore.PureState:
        return entangled_state(self.transmission, self.reflection, self.prep_phase)


def entangled_state(transmission: float, reflection: float, prep_phase: float) -> qcore.PureState:
    """Path-spin state a |up_p down_z> + b e^(i delta) |down_p up_z> after the first splitter.

    Basis order: |up_p up_z>, |up_p down_z>, |down_p up_z>, |down_p down_z>.
    """
    if abs(transmission**2 + reflection**2 - 1.0) > qcore.ATOL:
        raise ValueError("transmission^2 + reflection^2 must equal 1")
    amps = np.zeros(4, dtype=complex)
    amps[1] = transmission
    amps[2] = reflection * np.exp(1j * prep_phase)
    return qcore.PureState(amps)


def maximally_entangled_state() -> qcore.PureState:
    """Balanced splitter with a pi phase: the singlet-like path-spin state."""
    return entangled_state(1.0 / math.sqrt(2), 1.0 / math.sqrt(2), math.pi)


def path_direction(theta: float, phi: float) -> np.ndarray:
    """Bloch direction measured by the recombining stage at angles (theta, phi)."""
    return np.array(
        [
            math.sin(2 * theta) * math.cos(phi),
            math.sin(2 * theta) * math.sin(phi),
            -math.cos(2 * theta),
        ]
    )


def path_observable(theta: float, phi: float) -> np.ndarray:
    """Which-port observable of the recombining stage; eigenvalues exactly +/-1."""
    return qcore.observable_from_bloch(path_direction(theta, phi))


def angles_for_direction(direction) -> tuple[float, float]:
    """Analyzer angles (theta, phi) whose path observable measures along ``direction``."""
    vec = qcore.require_unit(direction)
    theta = 0.5 * math.acos(max(-1.0, min(1.0, -vec[2])))
    phi = math.atan2(vec[1], vec[0])
    return theta, phi


@dataclass(frozen=True)
class Setting:
    """One joint measurement configuration, with optional (i, j) labels for reports."""

    theta: float
    phi: float
    spin_axis: np.ndarray
    label: tuple[int, int] | None = None

    def __post_init__(self):
        object.__setattr__(self, "spin_axis", qcore.require_unit(self.spin_axis))


@dataclass(frozen=True)
class DetectionCounts:
    """Spin +/- tallies behind the two path output ports for one setting.

    ``n_*`` counts sit behind the positive path port, ``m_*`` behind the negative
    one; ``*_plus``/``*_minus`` split each port by spin outcome.
    """

    n_plus: int
    n_minus: int
    m_plus: int
    m_minus: int

    @property
    def path_plus(self) -> int:
        return self.n_plus + self.n_minus

    @property
    def path_minus(self) -> int:
        return self.m_plus + self.m_minus

    @property
    def shots(self) -> int:
        return self.path_plus + self.path_minus

    def merged(self, other: "DetectionCounts") -> "DetectionCounts":
        return DetectionCounts(
            self.n_plus + other.n_plus,
            self.n_minus + other.n_minus,
            self.m_plus + other.m_plus,
            self.m_minus + other.m_minus,
        )


@dataclass(frozen=True)
class EventRecord:
    setting: int
    shot_index: int
    path_outcome: int
    spin_outcome: int


def stream(seed: int, stream_id: int, start: int = 0) -> np.random.Generator:
    """Counter-based generator for (seed, stream_id), positioned at draw ``start``.

    Philox advances in blocks of four 64-bit outputs, so position by whole blocks
    and discard the remainder; each sampled shot consumes exactly one draw, which
    makes any partition of the shot range reproduce the unpartitioned stream.
    """
    key = np.array([seed & 0xFFFFFFFFFFFFFFFF, stream_id & 0xFFFFFFFFFFFFFFFF], dtype=np.uint64)
    bitgen = np.random.Philox(key=key)
    if start:
        bitgen.advance(start // 4)
    gen = np.random.Generator(bitgen)
    if start % 4:
        gen.random(start % 4)
    return gen


def born_probabilities(state: qcore.PureState, setting: Setting) -> np.ndarray:
    """Joint outcome probabilities [(path+,spin+), (path+,spin-), (path-,spin+), (path-,spin-)]."""
    direction = path_direction(setting.theta, setting.phi)
    probs = np.empty(4)
    for path_bit in (0, 1):
        for spin_bit in (0, 1):
            probs[2 * path_bit + spin_bit] = qcore.joint_probability(
                state,
                qcore.projector(direction, path_bit),
                qcore.projector(setting.spin_axis, spin_bit),
            )
    probs = np.clip(probs, 0.0, None)
    return probs / probs.sum()


def sample_setting(
    state: qcore.PureState,
    setting: Setting,
    shots: int,
    seed: int,
    setting_index: int,
    start: int = 0,
) -> tuple[np.ndarray, np.ndarray]:
    """Draw ``shots`` i.i.d. joint outcomes for one setting, starting at shot ``start``."""
    cum = np.cumsum(born_probabilities(state, setting))
    cum[-1] = 1.0
    uniforms = stream(seed, setting_index, start).random(shots)
    outcomes = np.searchsorted(cum, uniforms, side="right").astype(np.uint8)
    return (outcomes >> 1).astype(np.uint8), (outcomes & 1).astype(np.uint8)


def _partition(shots: int, workers: int) -> list[tuple[int, int]]:
    # block-of-4 aligned chunks so each worker resumes the stream exactly
    workers = max(1, workers)
    step = -(-shots // workers)
    step += (-step) % 4
    return [(lo, min(lo + step, shots)) for lo in range(0, shots, max(step, 4))]


def counts_from_outcomes(path_bits: np.ndarray, spin_bits: np.ndarray) -> DetectionCounts:
    joint = 2 * path_bits.astype(int) + spin_bits.astype(int)
    tallies = np.bincount(joint, minlength=4)
    return DetectionCounts(
        n_plus=int(tallies[0]),
        n_minus=int(tallies[1]),
        m_plus=int(tallies[2]),
        m_minus=int(tallies[3]),
    )


@dataclass(frozen=True)
class SamplingResult:
    settings: tuple[Setting, ...]
    counts: tuple[DetectionCounts, ...]
    outcomes: tuple[tuple[np.ndarray, np.ndarray], ...]
    shots_per_setting: int
    seed: int

    def events(self) -> Iterator[EventRecord]:
        for s_idx, (path_bits, spin_bits) in enumerate(self.outcomes):
            for shot, (p, s) in enumerate(zip(path_bits, spin_bits)):
                yield EventRecord(s_idx, shot, int(p), int(s))


def sample_events(
    state: qcore.PureState,
    settings: Sequence[Setting],
    shots_per_setting: int,
    seed: int,
    workers: int = 1,
) -> SamplingResult:
    """Sample every setting independently; results are identical for any worker count."""
    if shots_per_setting < 0:
        raise ValueError("shots must be nonnegative")

    def run_setting(s_idx: int) -> tuple[np.ndarray, np.ndarray]:
        if shots_per_setting == 0:
            empty = np.zeros(0, dtype=np.uint8)
            return empty, empty
        parts = _partition(shots_per_setting, workers)
        if workers > 1 and len(parts) > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                chunks = list(
                    pool.map(
                        lambda span: sample_setting(
                            state, settings[s_idx], span[1] - span[0], seed, s_idx, span[0]
                        ),
                        parts,
                    )
                )
        else:
            chunks = [
                sample_setting(state, settings[s_idx], hi - lo, seed, s_idx, lo)
                for lo, hi in parts
            ]
        return (
            np.concatenate([c[0] for c in chunks]),
            np.concatenate([c[1] for c in chunks]),
        )

    outcomes = tuple(run_setting(i) for i in range(len(settings)))
    counts = tuple(counts_from_outcomes(p, s) for p, s in outcomes)
    return SamplingResult(
        settings=tuple(settings),
        counts=counts,
        outcomes=outcomes,
        shots_per_setting=shots_per_setting,
        seed=seed,
    )


def correlator_from_counts(counts: DetectionCounts) -> float:
    """Joint-frequency correlator: signed outcome products averaged over shots."""
    if counts.shots < 1:
        raise ValueError("correlator undefined for zero shots")
    return (counts.n_plus - counts.n_minus - counts.m_plus + counts.m_minus) / counts.shots


def correlator_product_form(counts: DetectionCounts) -> float:
    """Product of the path-port asymmetry and the summed per-port spin asymmetries.

    Evaluated on count fractions. On maximally entangled states the path factor
    vanishes, so this can disagree with the joint-frequency correlator; it is kept
    for side-by-side reporting, not for the estimation pipeline.
    """
    if counts.shots < 1:
        raise ValueError("correlator undefined for zero shots")
    total = counts.shots
    path_asym = (counts.path_plus - counts.path_minus) / total
    spin_asym = (
        (counts.n_plus - counts.n_minus) + (counts.m_plus - counts.m_minus)
    ) / total
    return path_asym * spin_asym


def steering_bases(bases: MeasurementBases | None = None) -> MeasurementBases:
    """Analyzer directions that realize a preparation basis on the entangled state.

    The shared state anti-correlates path and spin, so measuring the path along the
    negated class direction leaves the spin side in the intended preparation for
    outcome bit 0. Defaults to the two-bit protocol bases.
    """
    if bases is None:
        bases = default_bases(2)
    return MeasurementBases(alice=-np.asarray(bases.alice), bob=np.asarray(bases.bob))


def protocol_settings(bases: MeasurementBases) -> list[Setting]:
    """All (class, bit) setting pairs in row-major order, labeled 1-based."""
    settings = []
    for i, alice_dir in enumerate(bases.alice):
        theta, phi = angles_for_direction(alice_dir)
        for j, spin_axis in enumerate(bases.bob):
            settings.append(
                Setting(theta=theta, phi=phi, spin_axis=spin_axis, label=(i + 1, j + 1))
            )
    return settings


@dataclass(frozen=True)
class ProtocolEstimate:
    correlators: np.ndarray
    bell: float
    success: float
    result: SamplingResult


def estimate_protocol(
    state: qcore.PureState,
    bases: MeasurementBases,
    shots_per_setting: int,
    seed: int,
    workers: int = 1,
) -> ProtocolEstimate:
    """Estimate the two-bit expression value and success probability from counts.

    The four settings measure the path along each of Alice's directions and the
    spin along each of Bob's; the expression estimate is the signed sum of the
    joint-frequency correlators and the success estimate follows the exact
    success/expression identity.
    """
    if bases.n != 2:
        raise ValueError("count-based estimation implemented for the 2-bit protocol")
    if shots_per_setting < 1:
        raise ValueError("shots must be >= 1")
    settings = protocol_settings(bases)
    result = sample_events(state, settings, shots_per_setting, seed, workers=workers)
    correlators = np.array(
        [correlator_from_counts(c) for c in result.counts]
    ).reshape(2, 2)
    value = correlators[0, 0] + correlators[0, 1] + correlators[1, 0] - correlators[1, 1]
    return ProtocolEstimate(
        correlators=correlators,
        bell=value,
        success=0.5 + value / 8.0,
        result=result,
    )
