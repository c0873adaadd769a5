"""Property-suite runner.

Each family draws seeded random instances, runs one property check per
instance and records a normalised margin (>= 0 means the property held with
room to spare). Failing instances are dumped as Matrix Market files so they
can be replayed through the CLI.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from .. import bounds as bd
from .. import congruence as cg
from .. import core_linalg as cl
from .. import sharpness as sh
from .. import singular as sv
from ..config import Tolerances, resolve
from ..core_linalg import Ordering
from ..errors import FactorizationInvalid, RelboundError
from .generators import (
    Clustered,
    InstanceSpec,
    LogUniform,
    Signed,
    derive_seed,
    gen_hermitian,
    gen_perturbation,
    gen_psd_perturbation,
    gen_rectangular,
    gen_singular_perturbation,
    haar_unitary,
    make_rng,
    random_hermitian,
)
from .mmio import write_matrix

TARGET_KS = (0.1, 0.5, 0.9, 1.0)
# k over rectangular pairs is itself ill-conditioned once sigma_max / sigma_min
# nears 1e6, so the 1e-10 oracle comparisons use four orders of magnitude
SV_SPECTRUM = LogUniform(1e-2, 1e2)
BUGS = ("upper_index",)


@dataclass(frozen=True)
class SuiteConfig:
    families: dict = field(default_factory=dict)  # name -> instance count
    seed: int = 0
    n_max: int = 32
    dump_dir: str | None = None
    inject_bug: str | None = None
    workers: int = 1

    @classmethod
    def from_dict(cls, data: dict) -> "SuiteConfig":
        unknown = set(data) - {"families", "seed", "n_max", "dump_dir", "inject_bug", "workers"}
        if unknown:
            raise ValueError(f"unknown suite config keys: {sorted(unknown)}")
        cfg = cls(**data)
        cfg.validate()
        return cfg

    @classmethod
    def load(cls, path) -> "SuiteConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def validate(self) -> None:
        bad = set(self.families) - set(FAMILIES)
        if bad:
            raise ValueError(f"unknown families: {sorted(bad)}")
        if self.n_max < 2:
            raise ValueError("n_max must be >= 2")
        if self.inject_bug is not None and self.inject_bug not in BUGS:
            raise ValueError(f"unknown bug {self.inject_bug!r}; choose from {BUGS}")


def default_config(instances: int = 200, seed: int = 0, **kw) -> SuiteConfig:
    return SuiteConfig(families={name: instances for name in FAMILIES}, seed=seed, **kw)


@dataclass
class InstanceResult:
    family: str
    index: int
    seed: int
    passed: bool
    margin: float
    detail: str = ""
    matrices: dict = field(default_factory=dict, repr=False)


@dataclass
class FamilySummary:
    name: str
    count: int = 0
    passed: int = 0
    failed: int = 0
    worst_margin: float = float("inf")
    failures: list = field(default_factory=list)  # (index, seed, detail, dump paths)

    def add(self, res: InstanceResult, dumps: list[str]) -> None:
        self.count += 1
        self.worst_margin = min(self.worst_margin, res.margin)
        if res.passed:
            self.passed += 1
        else:
            self.failed += 1
            self.failures.append({"index": res.index, "seed": res.seed, "detail": res.detail, "dumps": dumps})


@dataclass
class SuiteSummary:
    seed: int
    families: dict = field(default_factory=dict)
    elapsed: float = 0.0

    @property
    def total(self) -> int:
        return sum(f.count for f in self.families.values())

    @property
    def failed(self) -> int:
        return sum(f.failed for f in self.families.values())

    @property
    def all_passed(self) -> bool:
        return self.failed == 0

    def lines(self) -> list[str]:
        out = []
        for f in self.families.values():
            mark = "PASS" if f.failed == 0 else "FAIL"
            out.append(f"{mark} {f.name:16s} {f.passed:5d}/{f.count:<5d} worst margin {f.worst_margin:+.3e}")
        out.append(f"{self.total - self.failed}/{self.total} instances passed in {self.elapsed:.1f}s")
        return out


# --------------------------------------------------------------------------
# instance helpers


def _size(rng: np.random.Generator, n_max: int, lo: int = 2) -> int:
    return int(rng.integers(lo, n_max + 1))


def _hermitian_pair(seed: int, n_max: int, rng: np.random.Generator, full_rank: bool = False,
                    psd: bool = False, target_k: float | None = None, kernel: bool | None = None):
    n = _size(rng, n_max)
    r = n if full_rank else int(rng.integers(1, n + 1))
    dist = LogUniform(1e-3, 1e3) if psd else Signed(1e-3, 1e3)
    spec = InstanceSpec(n=n, rank=r, spectrum=dist, psd=psd, seed=seed)
    A = gen_hermitian(spec)
    k = float(rng.choice(TARGET_KS)) if target_k is None else target_k
    if kernel is None:
        kernel = bool(rng.integers(2))
    E = gen_perturbation(A, k, seed, kernel_component=kernel)
    return A, E, k


def _rel(margin: float, scale: float) -> float:
    return margin / max(scale, 1e-300)


def _verdict_result(name, idx, seed, verdict: bd.BoundVerdict, scale: float, mats: dict) -> InstanceResult:
    return InstanceResult(
        name, idx, seed, verdict.holds, _rel(verdict.slack - verdict.worst_violation, scale),
        "" if verdict.holds else f"worst violation {verdict.worst_violation:.3e}", mats,
    )


def _mis_shift(report: bd.EigenBoundReport) -> bd.EigenBoundReport:
    """Injected bug: pair each ceiling with lambda_i(A + E) instead of the shifted index."""
    entries = tuple(
        bd.EigenBound(e.index, e.lambda_i, e.lower, e.upper, e.index) for e in report.entries
    )
    return bd.EigenBoundReport(report.n, report.r, entries, report.k, report.psd_mode)


# --------------------------------------------------------------------------
# families


def fam_eigen_soundness(idx, seed, cfg, tol):
    rng = make_rng(seed, 100)
    bug = cfg.inject_bug == "upper_index"
    A, E, _ = _hermitian_pair(seed, cfg.n_max, rng, kernel=True if bug else None)
    dec = cl.hermitian_eig(A, Ordering.INERTIA_DEFAULT, tol)
    k = bd.k_sqrt(A, E, tol, dec=dec)
    report = bd.eigen_bounds(A, E, k, tol=tol, dec=dec)
    if bug:
        report = _mis_shift(report)
    verdict = bd.verify_eigen_bounds(A, E, report, tol)
    return _verdict_result("eigen_soundness", idx, seed, verdict, dec.norm, {"A": A, "E": E})


def fam_psd_relaxation(idx, seed, cfg, tol):
    rng = make_rng(seed, 101)
    n = _size(rng, cfg.n_max)
    r = int(rng.integers(1, n + 1))
    A = gen_hermitian(InstanceSpec(n=n, rank=r, spectrum=LogUniform(1e-3, 1e3), psd=True, seed=seed))
    k_target = float(rng.uniform(0.05, 10.0))
    E = gen_psd_perturbation(A, k_target, seed, kernel_component=bool(rng.integers(2)))
    k = bd.k_sqrt(A, E, tol)
    report = bd.eigen_bounds(A, E, k, psd_mode=True, tol=tol)
    verdict = bd.verify_eigen_bounds(A, E, report, tol)
    return _verdict_result("psd_relaxation", idx, seed, verdict, cl.hermitian_norm(A, tol), {"A": A, "E": E})


def fam_k_chain(idx, seed, cfg, tol):
    rng = make_rng(seed, 102)
    A, E, _ = _hermitian_pair(seed, cfg.n_max, rng)
    dec = cl.hermitian_eig(A, Ordering.INERTIA_DEFAULT, tol)
    ks = bd.k_sqrt(A, E, tol, dec=dec).value
    kl = bd.k_pinv(A, E, bd.Side.LEFT, tol, dec=dec).value
    kr = bd.k_pinv(A, E, bd.Side.RIGHT, tol, dec=dec).value
    kc = bd.k_sqrt_complex(A, E, tol)
    # each margin is scaled so that 0 is the acceptance threshold
    margins = [
        (kl * (1 + 1e-12) - ks) / kl,
        1.0 - abs(kl - kr) / (1e-12 * kl),
        1.0 - abs(ks - kc) / (1e-10 * ks),
    ]
    m = min(margins)
    return InstanceResult("k_chain", idx, seed, m >= 0, m,
                          "" if m >= 0 else f"k_sqrt={ks!r} k_left={kl!r} k_right={kr!r} k_branch={kc!r}",
                          {"A": A, "E": E})


def _commuting_factors(dec: cl.SpectralDecomposition, rng: np.random.Generator):
    """A1 = V diag(f) V*, A2 = V diag(g) V* with f g = lambda, both zero on ker(A)."""
    lam = dec.eigenvalues
    r = dec.rank
    f = np.zeros(dec.n, dtype=np.complex128)
    t = rng.uniform(0.0, 1.0, size=r)
    phase = np.exp(1j * rng.uniform(0, 2 * np.pi, size=r))
    f[:r] = np.abs(lam[:r]) ** t * phase
    g = np.zeros_like(f)
    g[:r] = lam[:r] / f[:r]
    V = dec.V
    return (V * f) @ V.conj().T, (V * g) @ V.conj().T


def fam_general_class(idx, seed, cfg, tol):
    rng = make_rng(seed, 103)
    A, E, k_target = _hermitian_pair(seed, cfg.n_max, rng)
    dec = cl.hermitian_eig(A, Ordering.INERTIA_DEFAULT, tol)
    n = dec.n
    eye = np.eye(n, dtype=np.complex128)
    half = cl.sqrt_normal(dec)
    ks = bd.k_sqrt(A, E, tol, dec=dec).value
    kl = bd.k_pinv(A, E, bd.Side.LEFT, tol, dec=dec).value
    kr = bd.k_pinv(A, E, bd.Side.RIGHT, tol, dec=dec).value
    margins = []
    for A1, A2, ref in ((half, half, ks), (A, eye, kl), (eye, A, kr)):
        kg = bd.k_general(A, E, A1, A2, tol).value
        margins.append(1.0 - abs(kg - ref) / (1e-10 * ref))
    # polar-class factorization P^{1/2} U, U* P^{1/2}
    U = haar_unitary(n, rng)
    ph = cl.sqrt_polar(dec)
    kp = bd.k_general_polar(A, E, ph @ U, U.conj().T @ ph, tol).value
    margins.append(1.0 - abs(kp - ks) / (1e-10 * ks))
    # random commuting factorization, E rescaled so k_general hits the target
    A1, A2 = _commuting_factors(dec, rng)
    kg = bd.k_general(A, E, A1, A2, tol).value
    Eg = E * (k_target / kg)
    kest = bd.k_general(A, Eg, A1, A2, tol)
    report = bd.eigen_bounds(A, Eg, kest, tol=tol, dec=dec)
    verdict = bd.verify_eigen_bounds(A, Eg, report, tol)
    margins.append(_rel(verdict.slack - verdict.worst_violation, dec.norm))
    # broken factorization must be rejected
    bump = random_hermitian(n, rng)
    A1_bad = A1 + 1e-6 * dec.norm ** 0.5 * bump / np.linalg.norm(bump, 2)
    try:
        bd.k_general(A, E, A1_bad, A2, tol)
        margins.append(-1.0)
    except FactorizationInvalid:
        margins.append(1.0)
    m = min(margins)
    return InstanceResult("general_class", idx, seed, m >= 0, m,
                          "" if m >= 0 else f"margins {margins}", {"A": A, "E": E, "A1": A1, "A2": A2})


def fam_congruence(idx, seed, cfg, tol):
    rng = make_rng(seed, 104)
    A, E, _ = _hermitian_pair(seed, cfg.n_max, rng)
    dec = cl.hermitian_eig(A, Ordering.INERTIA_DEFAULT, tol)
    D = cg.generate_admissible_D(dec, derive_seed(seed, 104), kappa_max=1e3)
    chk = cg.k_invariance(A, E, D, tol)
    m = 1.0 - chk.invariance_gap / tol.invariance_tol
    mats = {"A": A, "E": E, "D": D}
    if dec.rank == dec.n:
        # full rank: any invertible D is admissible
        G = rng.standard_normal((dec.n, dec.n)) + 1j * rng.standard_normal((dec.n, dec.n))
        chk2 = cg.k_invariance(A, E, G, tol)
        m = min(m, 1.0 - chk2.invariance_gap / tol.invariance_tol)
        mats["G"] = G
    return InstanceResult("congruence", idx, seed, m >= 0, m,
                          "" if m >= 0 else f"invariance gap {chk.invariance_gap:.3e}", mats)


def _condition_margin(sp: "sh._Spectra", i: int) -> float:
    """Guaranteed inequalities at index i, as a scaled margin."""
    n, r = sp.n, sp.r
    lam_i = float(sp.lam[i - 1])
    rel = sp.k * abs(lam_i)
    a = float(sp.lam_dec[n - r + i - 1]) + sp.norm_E - (lam_i + rel)
    b = sp.norm_E - rel
    scale = max(sp.norm_A, sp.norm_E)
    return (min(a, b) + sp.slack) / scale


def fam_sharpness(idx, seed, cfg, tol):
    rng = make_rng(seed, 105)
    n = _size(rng, cfg.n_max)
    full = bool(rng.integers(2))
    r = n if full else int(rng.integers(1, n + 1))
    A = gen_hermitian(InstanceSpec(n=n, rank=r, spectrum=Signed(1e-3, 1e3), seed=seed))
    E = random_hermitian(n, rng) * 10.0 ** rng.uniform(-4, 3)
    sp = sh._Spectra(A, E, tol)
    margins = [1.0]
    for i in range(1, sp.r + 1):
        if sp.terms(i).met:
            margins.append(_condition_margin(sp, i))
    if sp.r == sp.n:
        try:
            sh.exists_sharper_index(A, E, tol)
        except RelboundError:
            margins.append(-1.0)
    # multiplicity-guaranteed index on a clustered instance
    c = n - r + 1
    if c <= r:
        v = float(rng.choice([-1.0, 1.0])) * 10.0 ** rng.uniform(-2, 1)
        Ac = gen_hermitian(InstanceSpec(n=n, rank=r, spectrum=Clustered(v, c), seed=seed))
        i = sh.multiplicity_guarantee(Ac, tol)
        if i is None:
            margins.append(-1.0)
        else:
            for t in range(3):
                Et = random_hermitian(n, make_rng(seed, 105, t)) * 10.0 ** rng.uniform(-3, 2)
                margins.append(1.0 if sh.condition_32(Ac, Et, i, tol) else -1.0)
    m = min(margins)
    return InstanceResult("sharpness", idx, seed, m >= 0, m, "" if m >= 0 else f"margins {margins}",
                          {"A": A, "E": E})


def fam_singular(idx, seed, cfg, tol):
    rng = make_rng(seed, 106)
    m_ = _size(rng, cfg.n_max, 1)
    n_ = _size(rng, cfg.n_max, 1)
    r = int(rng.integers(1, min(m_, n_) + 1))
    A = gen_rectangular(InstanceSpec(n=n_, m=m_, rank=r, spectrum=SV_SPECTRUM, seed=seed))
    E = gen_singular_perturbation(A, float(rng.choice(TARGET_KS)), seed, relative=bool(rng.integers(2)))
    k = sv.k_singular(A, E, tol)
    report = sv.singular_bounds(A, E, tol, k=k)
    verdict = sv.verify_singular_bounds(A, E, report, tol)
    scale = cl.spectral_norm(A, tol)
    margins = [_rel(verdict.slack - verdict.worst_violation, scale)]
    kj = bd.k_sqrt(sv.jordan_wielandt(A), sv.jordan_wielandt(E), tol).value
    margins.append(1.0 - abs(kj - k.value) / (1e-10 * k.value))
    if m_ == n_:
        kp = sv.k_singular_polar(A, E, tol).value
        margins.append(1.0 - abs(kp - k.value) / (1e-10 * k.value))
    mm = min(margins)
    return InstanceResult("singular", idx, seed, mm >= 0, mm, "" if mm >= 0 else f"margins {margins}",
                          {"A": A, "E": E})


def fam_core_quality(idx, seed, cfg, tol):
    rng = make_rng(seed, 107)
    n = _size(rng, cfg.n_max, 1)
    r = int(rng.integers(0, n + 1))
    A = gen_hermitian(InstanceSpec(n=n, rank=r, spectrum=Signed(1e-1, 1e1), seed=seed))
    dec = cl.hermitian_eig(A, Ordering.INERTIA_DEFAULT, tol)
    V, lam = dec.V, dec.eigenvalues
    scale = max(dec.norm, 1e-300)
    eps_budget = 1e-12 * n
    resid = np.linalg.norm(A @ V - V * lam, 2) / scale
    orth = np.linalg.norm(V.conj().T @ V - np.eye(n), 2)
    margins = [1.0 - resid / eps_budget, 1.0 - orth / eps_budget]
    if r:
        Ap = cl.pseudo_inverse(A, tol)
        norm_p = np.linalg.norm(Ap, 2)
        mp = max(
            np.linalg.norm(A @ Ap @ A - A, 2) / scale,
            np.linalg.norm(Ap @ A @ Ap - Ap, 2) / norm_p,
            np.linalg.norm(A @ Ap - (A @ Ap).conj().T, 2),
            np.linalg.norm(Ap @ A - (Ap @ A).conj().T, 2),
        )
        margins.append(1.0 - mp / 1e-12)
        P = cl.polar_factor(dec).P
        k = float(rng.uniform(0, 1))
        for sgn in (1.0, -1.0):
            got = cl.hermitian_eig(A + sgn * k * P, Ordering.INERTIA_DEFAULT, tol).eigenvalues[:r]
            want = lam[:r] + sgn * k * np.abs(lam[:r])
            margins.append(1.0 - np.max(np.abs(got - want)) / (1e-11 * scale))
    m = min(margins)
    return InstanceResult("core_quality", idx, seed, m >= 0, m, "" if m >= 0 else f"margins {margins}",
                          {"A": A})


FAMILIES: dict[str, Callable] = {
    "eigen_soundness": fam_eigen_soundness,
    "psd_relaxation": fam_psd_relaxation,
    "k_chain": fam_k_chain,
    "general_class": fam_general_class,
    "congruence": fam_congruence,
    "sharpness": fam_sharpness,
    "singular": fam_singular,
    "core_quality": fam_core_quality,
}


# --------------------------------------------------------------------------
# runner


def run_instance(name: str, idx: int, cfg: SuiteConfig, tol: Tolerances | None = None) -> InstanceResult:
    """One instance of one family; exceptions become failures."""
    tol = resolve(tol)
    seed = derive_seed(cfg.seed, list(FAMILIES).index(name), idx)
    try:
        return FAMILIES[name](idx, seed, cfg, tol)
    except RelboundError as exc:
        return InstanceResult(name, idx, seed, False, float("-inf"), f"{type(exc).__name__}: {exc}")


def _dump(res: InstanceResult, dump_dir: str | None) -> list[str]:
    if dump_dir is None or not res.matrices:
        return []
    out = Path(dump_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for label, M in res.matrices.items():
        p = out / f"{res.family}_{res.index:05d}_{label}.mtx"
        write_matrix(p, M, comment=f" family={res.family} index={res.index} seed={res.seed}")
        paths.append(str(p))
    return paths


def _run_chunk(args) -> list[InstanceResult]:
    name, indices, cfg, tol = args
    return [run_instance(name, i, cfg, tol) for i in indices]


def run_suite(cfg: SuiteConfig, tol: Tolerances | None = None) -> SuiteSummary:
    """Run every configured family; failures are data, never exceptions."""
    cfg.validate()
    t0 = time.perf_counter()
    summary = SuiteSummary(seed=cfg.seed)
    for name, count in cfg.families.items():
        fam = FamilySummary(name)
        if cfg.workers > 1 and count > 1:
            chunks = [(name, list(range(w, count, cfg.workers)), cfg, tol) for w in range(cfg.workers)]
            with ProcessPoolExecutor(cfg.workers) as pool:
                results = [r for chunk in pool.map(_run_chunk, chunks) for r in chunk]
            results.sort(key=lambda r: r.index)
        else:
            results = (run_instance(name, i, cfg, tol) for i in range(count))
        for res in results:
            fam.add(res, [] if res.passed else _dump(res, cfg.dump_dir))
        summary.families[name] = fam
    summary.elapsed = time.perf_counter() - t0
    return summary
