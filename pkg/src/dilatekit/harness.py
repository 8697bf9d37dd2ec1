"""Seeded instance generation and suite orchestration.

Instance streams are deterministic functions of (seed, suite, counter):
the RNG for each instance is seeded from a SHA-256 digest of those three
values, so identical configurations produce byte-identical reports
regardless of process, platform, or execution order. Entry magnitudes and
verification bounds are capped by the config to keep arbitrary-precision
growth within a desk-scale budget.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .finite import (
    INCONCLUSIVE_VERDICT,
    NOT_SIMILAR,
    SCHUR_CLASSES,
    PreconditionFailed,
    halmos_build,
    ndilation_build,
    ndilation_verify,
    nonsimilar_pair,
    schur_build,
)
from .finsupp import Domain, FsVec
from .intertwine import (
    HypothesisFailed,
    extract_intertwiner,
    lift_intertwiner,
    make_pair,
    verify_lift,
)
from .matrix import Mat, SingularMatrix, Vec, unit_vec
from .report import FAIL, INCONCLUSIVE, Check, Report
from .seqops import Componentwise, Compose, ShiftRight
from .sequence import (
    ando_build,
    ando_verify,
    schaffer_build,
    schaffer_verify,
    standard_build,
    standard_minimality_check,
    standard_verify,
)
from .serialize import fsvec_from_json, fsvec_to_json, mat_to_json

ALL_SUITES = (
    "halmos",
    "schur",
    "nonsimilar",
    "ndilation",
    "schaffer",
    "standard",
    "wold",
    "intertwine",
    "ando",
)

RETRY_LIMIT = 64


class GenerationExhausted(RuntimeError):
    """Bounded resampling failed to hit the instance precondition."""


class SuiteError(RuntimeError):
    """A module error, wrapped with the instance that triggered it."""


@dataclass(frozen=True)
class SuiteConfig:
    seed: int = 42
    trials: int = 200
    dim_max: int = 4
    n_max: int = 12
    m_max: int = 8
    entry_bound: int = 9
    suites: tuple[str, ...] = ALL_SUITES

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.dim_max < 1:
            raise ValueError("dim_max must be >= 1")
        if self.n_max < 1 or self.m_max < 1:
            raise ValueError("bounds must be >= 1")
        if self.entry_bound < 1:
            raise ValueError("entry_bound must be >= 1")
        unknown = [s for s in self.suites if s not in ALL_SUITES]
        if unknown:
            raise ValueError(f"unknown suites: {unknown}")

    def echo(self) -> dict:
        return {
            "seed": self.seed,
            "trials": self.trials,
            "dim_max": self.dim_max,
            "n_max": self.n_max,
            "m_max": self.m_max,
            "entry_bound": self.entry_bound,
        }


# ----------------------------------------------------------------------
# deterministic randomness


def instance_rng(config: SuiteConfig, kind: str, counter: int) -> random.Random:
    """RNG for one instance, independent of process hash randomization."""
    digest = hashlib.sha256(f"{config.seed}:{kind}:{counter}".encode()).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def random_rational(rng: random.Random, bound: int) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def random_matrix(rng: random.Random, dim: int, bound: int) -> Mat:
    return Mat([[random_rational(rng, bound) for _ in range(dim)] for _ in range(dim)])


def random_vector(rng: random.Random, dim: int, bound: int) -> Vec:
    return tuple(random_rational(rng, bound) for _ in range(dim))


def random_fsvec(rng: random.Random, domain: Domain, dim: int, bound: int) -> FsVec:
    """Random finitely supported element: support size <= 6, small entries."""
    size = rng.randint(0, 6)
    items = []
    for _ in range(size):
        if domain is Domain.UNINAT:
            index = rng.randint(0, 12)
        elif domain is Domain.BIINT:
            index = rng.randint(-6, 6)
        else:
            index = (rng.randint(0, 6), rng.randint(0, 6))
        items.append((index, random_vector(rng, dim, bound)))
    acc: dict = {}
    for index, value in items:
        acc[index] = tuple(a + b for a, b in zip(acc[index], value)) if index in acc else value
    return FsVec(domain, dim, acc)


def resample(make: Callable, accept: Callable, what: str, limit: int = RETRY_LIMIT):
    for _ in range(limit):
        candidate = make()
        if accept(candidate):
            return candidate
    raise GenerationExhausted(f"no {what} found within {limit} attempts")


def invertible_matrix(rng: random.Random, dim: int, bound: int) -> Mat:
    def ok(m: Mat) -> bool:
        try:
            m.inverse()
            return True
        except SingularMatrix:
            return False

    return resample(lambda: random_matrix(rng, dim, bound), ok, "invertible matrix")


def polynomial_in(rng: random.Random, T: Mat, max_degree: int = 2) -> Mat:
    """A small-coefficient polynomial in T; always commutes with T exactly."""
    result = Mat.zeros(T.rows, T.rows)
    power = Mat.identity(T.rows)
    for _ in range(max_degree + 1):
        result = result + power.scale(rng.randint(-3, 3))
        power = power * T
    return result


def _basis_plus_random(rng: random.Random, dim: int, count: int) -> list[Vec]:
    """Standard basis first, padded with seeded random vectors to count."""
    probes = [unit_vec(dim, i) for i in range(dim)]
    probes += [random_vector(rng, dim, 9) for _ in range(max(0, count - dim))]
    return probes


def jordan_nilpotent(dim: int) -> Mat:
    return Mat([[1 if j == i + 1 else 0 for j in range(dim)] for i in range(dim)])


def block_diag(a: Mat, b: Mat) -> Mat:
    return Mat.block(
        [[a, Mat.zeros(a.rows, b.cols)], [Mat.zeros(b.rows, a.cols), b]]
    )


# ----------------------------------------------------------------------
# typed instance streams


def generate_instance(config: SuiteConfig, kind: str, counter: int = 0) -> dict:
    """The counter-th instance of a suite: a dict of named exact values.

    Preconditions are guaranteed by construction (commuting pairs, exact
    intertwiners) or by bounded resampling (invertible blocks, nonzero
    trace), never by rejection at verification time.
    """
    if kind not in ALL_SUITES:
        raise ValueError(f"unknown instance kind {kind!r}")
    rng = instance_rng(config, kind, counter)
    bound = config.entry_bound

    if kind in ("halmos", "wold"):
        dim = rng.randint(1, config.dim_max)
        return {"T": random_matrix(rng, dim, bound)}

    if kind == "schur":
        class_tag = SCHUR_CLASSES[counter % len(SCHUR_CLASSES)]
        dim = rng.randint(1, config.dim_max)

        def make() -> Optional[dict]:
            blocks = {name: random_matrix(rng, dim, bound) for name in "TBCD"}
            try:
                schur_build(class_tag, blocks["T"], blocks["B"], blocks["C"], blocks["D"])
            except PreconditionFailed:
                return None
            return blocks

        blocks = resample(make, lambda b: b is not None, f"class ({class_tag}) instance")
        return {"class_tag": class_tag, **blocks}

    if kind == "nonsimilar":
        dim = rng.randint(1, config.dim_max)
        T = resample(
            lambda: random_matrix(rng, dim, bound),
            lambda m: m.trace() != 0,
            "matrix with nonzero trace",
        )
        return {"T": T}

    if kind == "ndilation":
        dim = rng.randint(1, min(4, config.dim_max))
        return {"T": random_matrix(rng, dim, bound), "N": rng.randint(1, 4)}

    if kind in ("schaffer", "standard"):
        dim = rng.randint(1, config.dim_max)
        domain = Domain.BIINT if kind == "schaffer" else Domain.UNINAT
        probe_count = 20 if kind == "schaffer" else 10
        T = random_matrix(rng, dim, bound)
        probes = _basis_plus_random(rng, dim, probe_count)
        seq_probes = [random_fsvec(rng, domain, dim, 9) for _ in range(10)]
        return {"T": T, "probes": probes, "seq_probes": seq_probes}

    if kind == "intertwine":
        if counter % 2 == 0:
            dim = rng.randint(1, config.dim_max)
            T = random_matrix(rng, dim, bound)
            return {"T1": T, "T2": T, "S": polynomial_in(rng, T)}
        a = rng.randint(1, max(1, config.dim_max - 1))
        A = random_matrix(rng, a, bound)
        B1 = random_matrix(rng, rng.randint(1, 2), bound)
        B2 = random_matrix(rng, rng.randint(1, 2), bound)
        core = polynomial_in(rng, A)
        S = Mat.block(
            [
                [core, Mat.zeros(a, B2.rows)],
                [Mat.zeros(B1.rows, a), Mat.zeros(B1.rows, B2.rows)],
            ]
        )
        return {"T1": block_diag(A, B1), "T2": block_diag(A, B2), "S": S}

    if kind == "ando":
        dim = rng.randint(1, config.dim_max)
        T = random_matrix(rng, dim, bound)
        probes = _basis_plus_random(rng, dim, 3)
        seq_probes = [random_fsvec(rng, Domain.GRID, dim, 9) for _ in range(3)]
        return {"T": T, "S": polynomial_in(rng, T), "probes": probes, "seq_probes": seq_probes}

    raise AssertionError(f"unhandled kind {kind}")


# ----------------------------------------------------------------------
# aggregation of per-instance reports into one suite report


class _Aggregator:
    """Folds per-trial reports: a named check passes iff it passed on every
    trial; the first failure is kept as witness with instance provenance."""

    def __init__(self):
        self.slots: dict[str, dict] = {}

    def fold_check(self, check: Check, trial: int, instance: dict) -> None:
        slot = self.slots.setdefault(
            check.name,
            {"ok": True, "bound": check.bound, "witness": None, "inconclusive": 0, "trials": 0},
        )
        slot["trials"] += 1
        if check.status == FAIL and slot["witness"] is None:
            slot["ok"] = False
            slot["witness"] = {"trial": trial, "instance": instance, **(check.witness or {})}
        elif check.status == INCONCLUSIVE:
            slot["inconclusive"] += 1

    def fold(self, rep: Report, trial: int, instance: dict) -> None:
        for check in rep.checks:
            self.fold_check(check, trial, instance)

    def emit(self, rep: Report) -> None:
        for name, slot in self.slots.items():
            detail = f"{slot['trials']} trials"
            if slot["inconclusive"]:
                detail += f", {slot['inconclusive']} inconclusive"
            rep.add(name, slot["ok"], bound=slot["bound"], witness=slot["witness"], detail=detail)


def _instance_json(kind: str, counter: int, inst: dict) -> dict:
    out: dict = {"kind": kind, "counter": counter}
    for key, value in inst.items():
        if isinstance(value, Mat):
            out[key] = mat_to_json(value)
        elif isinstance(value, int):
            out[key] = value
        elif isinstance(value, str):
            out[key] = value
        # probe lists are regenerable from (seed, kind, counter); omitted
    return out


def _wrap_errors(kind: str, trial: int, instance: dict):
    class _Ctx:
        def __enter__(self):
            return self

        def __exit__(self, exc_type, exc, tb):
            if exc is not None:
                raise SuiteError(
                    f"suite {kind!r} trial {trial} raised {exc_type.__name__}: {exc}; "
                    f"instance {_instance_json(kind, trial, instance)}"
                ) from exc
            return False

    return _Ctx()


# ----------------------------------------------------------------------
# suites


def _suite_halmos(config: SuiteConfig) -> Report:
    rep = Report(suite="halmos", config=config.echo())
    agg = _Aggregator()
    for t in range(config.trials):
        inst = generate_instance(config, "halmos", t)
        T = inst["T"]
        with _wrap_errors("halmos", t, inst):
            hd = halmos_build(T)
            eye = Mat.identity(2 * T.rows)
            trial_rep = Report(suite="halmos_trial")
            trial_rep.add(
                "closed-form inverse: U * U_inv = U_inv * U = I",
                hd.U * hd.U_inv == eye and hd.U_inv * hd.U == eye,
                witness={"U": mat_to_json(hd.U)},
            )
            trial_rep.add(
                "closed form equals the dense-inverse oracle entrywise",
                hd.U_inv == hd.U.inverse(),
                witness={"U": mat_to_json(hd.U), "closed_form": mat_to_json(hd.U_inv)},
            )
        agg.fold(trial_rep, t, _instance_json("halmos", t, inst))
    agg.emit(rep)
    return rep


def _suite_schur(config: SuiteConfig) -> Report:
    rep = Report(suite="schur", config=config.echo())
    agg = _Aggregator()
    for t in range(config.trials):
        inst = generate_instance(config, "schur", t)
        tag = inst["class_tag"]
        with _wrap_errors("schur", t, inst):
            fam = schur_build(tag, inst["T"], inst["B"], inst["C"], inst["D"])
            eye = Mat.identity(fam.U.rows)
            trial_rep = Report(suite="schur_trial")
            trial_rep.add(
                f"class ({tag}): U * U_inv = U_inv * U = I",
                fam.U * fam.U_inv == eye and fam.U_inv * fam.U == eye,
                witness={"U": mat_to_json(fam.U)},
            )
            trial_rep.add(
                f"class ({tag}): closed form equals the dense-inverse oracle",
                fam.U_inv == fam.U.inverse(),
                witness={"U": mat_to_json(fam.U), "closed_form": mat_to_json(fam.U_inv)},
            )
        agg.fold(trial_rep, t, _instance_json("schur", t, inst))
    agg.emit(rep)
    return rep


def _suite_nonsimilar(config: SuiteConfig) -> Report:
    rep = Report(suite="nonsimilar", config=config.echo())
    agg = _Aggregator()
    for t in range(config.trials):
        inst = generate_instance(config, "nonsimilar", t)
        T = inst["T"]
        with _wrap_errors("nonsimilar", t, inst):
            pair = nonsimilar_pair(T)
            eye = Mat.identity(2 * T.rows)
            trial_rep = Report(suite="nonsimilar_trial")
            trial_rep.add(
                "nonzero trace yields verdict not_similar",
                pair.verdict == NOT_SIMILAR,
                witness={"verdict": pair.verdict, "trace_T": str(T.trace())},
            )
            trial_rep.add(
                "trace(A1) = 2 trace(T) and trace(A2) = trace(T)",
                pair.trace_a1 == 2 * T.trace() and pair.trace_a2 == T.trace(),
                witness={"trace_a1": str(pair.trace_a1), "trace_a2": str(pair.trace_a2)},
            )
            trial_rep.add(
                "witness soundness: verdict not_similar implies trace(A1) != trace(A2)",
                pair.verdict != NOT_SIMILAR or pair.trace_a1 != pair.trace_a2,
                witness={"trace_a1": str(pair.trace_a1), "trace_a2": str(pair.trace_a2)},
            )
            trial_rep.add(
                "both dilations invertible with certified inverses",
                pair.A1 * pair.A1_inv == eye and pair.A2 * pair.A2_inv == eye,
                witness={"A1": mat_to_json(pair.A1)},
            )
        agg.fold(trial_rep, t, _instance_json("nonsimilar", t, inst))
    agg.emit(rep)

    zero_trace = Mat([[0, 1], [0, 0]])
    pair = nonsimilar_pair(zero_trace)
    rep.add(
        "zero-trace block instance is reported inconclusive",
        pair.verdict == INCONCLUSIVE_VERDICT,
        witness={"verdict": pair.verdict},
    )
    rep.add_inconclusive(
        "trace comparison cannot separate the pair at trace 0",
        detail="both dilations of the zero-trace instance have trace 0",
    )
    return rep


def _suite_ndilation(config: SuiteConfig) -> Report:
    rep = Report(suite="ndilation", config=config.echo())
    agg = _Aggregator()
    breaks = 0
    rng_probes = 5
    for t in range(config.trials):
        inst = generate_instance(config, "ndilation", t)
        T, N = inst["T"], inst["N"]
        rng = instance_rng(config, "ndilation_probes", t)
        probes = [random_vector(rng, T.rows, 9) for _ in range(rng_probes)]
        with _wrap_errors("ndilation", t, inst):
            nd = ndilation_build(T, N)
            eye = Mat.identity(nd.U.rows)
            trial_rep = Report(suite="ndilation_trial")
            trial_rep.add(
                "closed-form inverse: U * U_inv = U_inv * U = I",
                nd.U * nd.U_inv == eye and nd.U_inv * nd.U == eye,
                witness={"N": N, "T": mat_to_json(T)},
            )
            verify = ndilation_verify(nd, probes, k_max=N + 1)
            hard = [c for c in verify.checks if c.status != INCONCLUSIVE]
            merged_ok = all(c.status != FAIL for c in hard)
            first_fail = next((c for c in hard if c.status == FAIL), None)
            trial_rep.add(
                "compression T^k = P U^k I for all k <= N on probes",
                merged_ok,
                bound=N,
                witness=None if merged_ok else first_fail.witness,
            )
            if verify.data.get("breaks_at_n_plus_1"):
                breaks += 1
        agg.fold(trial_rep, t, _instance_json("ndilation", t, inst))
    agg.emit(rep)
    rep.data["instances_breaking_at_n_plus_1"] = breaks
    return rep


def _suite_schaffer(config: SuiteConfig) -> Report:
    rep = Report(suite="schaffer", config=config.echo())
    agg = _Aggregator()
    for t in range(config.trials):
        inst = generate_instance(config, "schaffer", t)
        with _wrap_errors("schaffer", t, inst):
            sd = schaffer_build(inst["T"])
            trial_rep = schaffer_verify(
                sd, inst["probes"], config.n_max, seq_probes=inst["seq_probes"]
            )
        agg.fold(trial_rep, t, _instance_json("schaffer", t, inst))
    agg.emit(rep)
    return rep


def _suite_standard(config: SuiteConfig) -> Report:
    rep = Report(suite="standard", config=config.echo())
    agg = _Aggregator()
    for t in range(config.trials):
        inst = generate_instance(config, "standard", t)
        with _wrap_errors("standard", t, inst):
            sd = standard_build(inst["T"])
            trial_rep = standard_verify(
                sd, inst["probes"], config.n_max, seq_probes=inst["seq_probes"]
            )
            minimality = standard_minimality_check(sd, config.n_max)
            for check in minimality.checks:
                trial_rep.checks.append(check)
        agg.fold(trial_rep, t, _instance_json("standard", t, inst))
    agg.emit(rep)
    return rep


def _suite_wold(config: SuiteConfig) -> Report:
    from .wold import EXTENDED, STRICT, NotInjective, wold_decompose

    rep = Report(suite="wold", config=config.echo())
    agg = _Aggregator()
    for t in range(config.trials):
        inst = generate_instance(config, "wold", t)
        T = inst["T"]
        with _wrap_errors("wold", t, inst):
            w = wold_decompose(T, EXTENDED)
            trial_rep = Report(suite="wold_trial")
            for check in w.certificates.checks:
                trial_rep.checks.append(check)
            trial_rep.add(
                "stabilization index at most the space dimension",
                w.stabilization_index <= T.rows,
                witness={"index": w.stabilization_index, "dim": T.rows},
            )
        agg.fold(trial_rep, t, _instance_json("wold", t, inst))
    agg.emit(rep)

    d = config.dim_max
    nilpotent = jordan_nilpotent(d)
    w = wold_decompose(nilpotent, EXTENDED)
    rep.add(
        "nilpotent block: bijective part is zero, index equals nilpotency degree",
        not w.Vb_basis and w.stabilization_index == d and w.certificates.passed,
        witness={
            "index": w.stabilization_index,
            "Vb": [list(map(str, v)) for v in w.Vb_basis],
        },
    )

    rejected = False
    witness_ok = False
    try:
        wold_decompose(nilpotent, STRICT)
    except NotInjective as exc:
        rejected = True
        image = nilpotent.apply(exc.witness)
        witness_ok = all(x == 0 for x in image) and any(x != 0 for x in exc.witness)
    rep.add(
        "strict mode rejects non-injective maps with a kernel witness",
        rejected and witness_ok,
        witness={"rejected": rejected, "witness_in_kernel": witness_ok},
    )

    rng = instance_rng(config, "wold_strict", 0)
    T_inv = invertible_matrix(rng, min(3, config.dim_max), config.entry_bound)
    w = wold_decompose(T_inv, STRICT)
    rep.add(
        "strict mode on an injective map: trivial complement, all certificates pass",
        not w.Vs_basis and len(w.Vb_basis) == T_inv.rows and w.certificates.passed,
        witness={"Vs": [list(map(str, v)) for v in w.Vs_basis]},
    )
    return rep


def _suite_intertwine(config: SuiteConfig) -> Report:
    rep = Report(suite="intertwine", config=config.echo())
    agg = _Aggregator()
    for t in range(config.trials):
        inst = generate_instance(config, "intertwine", t)
        rng = instance_rng(config, "intertwine_probes", t)
        d2 = inst["T2"].rows
        probes = [random_fsvec(rng, Domain.UNINAT, d2, 9) for _ in range(5)]
        with _wrap_errors("intertwine", t, inst):
            pair = make_pair(inst["T1"], inst["T2"], inst["S"])
            R = lift_intertwiner(pair)
            trial_rep = verify_lift(R, pair, probes, n_max=config.n_max)
            extracted = extract_intertwiner(R, pair.dil1, pair.dil2, cert_bound=config.n_max)
            trial_rep.add(
                "round trip: extracted map equals the lifted one",
                extracted == pair.S,
                witness={"extracted": mat_to_json(extracted), "S": mat_to_json(pair.S)},
            )
        agg.fold(trial_rep, t, _instance_json("intertwine", t, inst))
    agg.emit(rep)

    rng = instance_rng(config, "intertwine_corrupt", 0)
    d = rng.randint(1, config.dim_max)
    T = random_matrix(rng, d, config.entry_bound)
    pair = make_pair(T, T, Mat.identity(d))
    bad = Compose((ShiftRight(d), Componentwise(Mat.identity(d))))
    caught = None
    try:
        extract_intertwiner(bad, pair.dil1, pair.dil2, cert_bound=config.n_max)
    except HypothesisFailed as exc:
        caught = exc
    reproduced = False
    if caught is not None:
        probe = fsvec_from_json(caught.witness["probe"])
        if caught.relation == "R P2 = P1 R":
            lhs = bad.apply(pair.dil2.P.apply(probe))
            rhs = pair.dil1.P.apply(bad.apply(probe))
        else:
            lhs = pair.dil1.U.apply(bad.apply(probe))
            rhs = bad.apply(pair.dil2.U.apply(probe))
        reproduced = (
            lhs != rhs
            and fsvec_to_json(lhs) == caught.witness["lhs"]
            and fsvec_to_json(rhs) == caught.witness["rhs"]
        )
    rep.add(
        "corrupted lift fails bounded certification with a reproducible witness",
        caught is not None and reproduced,
        bound=config.n_max,
        witness={
            "caught": caught is not None,
            "relation": caught.relation if caught else None,
        },
    )
    return rep


def _suite_ando(config: SuiteConfig) -> Report:
    rep = Report(suite="ando", config=config.echo())
    agg = _Aggregator()
    for t in range(config.trials):
        inst = generate_instance(config, "ando", t)
        with _wrap_errors("ando", t, inst):
            av = ando_build(inst["T"], inst["S"])
            trial_rep = ando_verify(
                av,
                inst["probes"],
                n_max=config.m_max,
                m_max=config.m_max,
                seq_probes=inst["seq_probes"],
            )
        agg.fold(trial_rep, t, _instance_json("ando", t, inst))
    agg.emit(rep)
    return rep


_SUITE_FUNCTIONS = {
    "halmos": _suite_halmos,
    "schur": _suite_schur,
    "nonsimilar": _suite_nonsimilar,
    "ndilation": _suite_ndilation,
    "schaffer": _suite_schaffer,
    "standard": _suite_standard,
    "wold": _suite_wold,
    "intertwine": _suite_intertwine,
    "ando": _suite_ando,
}


def run_suites(config: SuiteConfig) -> list[Report]:
    """Run the selected suites in canonical order; deterministic output."""
    return [_SUITE_FUNCTIONS[kind](config) for kind in ALL_SUITES if kind in config.suites]


def overall_exit_code(reports: Sequence[Report]) -> int:
    """0 when nothing failed (inconclusive allowed), 1 otherwise."""
    return 0 if all(r.passed for r in reports) else 1
