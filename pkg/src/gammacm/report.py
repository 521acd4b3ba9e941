"""Run every applicable check on a spec and collect the results."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field, replace
from typing import Optional

from . import classical, oracle, qlattice, qmonotone, specfun
from .errors import DomainError
from .model import RatioSpec, Verdict, conjunction


@dataclass(frozen=True)
class CheckOptions:
    k_max: Optional[int] = None
    n_max: int = 256
    u_max: Optional[float] = None
    grid_points: int = 2000
    rel_tol: float = 1e-14
    max_order: int = 8
    run_oracle: bool = False
    timing: bool = True


@dataclass
class CheckReport:
    spec_echo: dict
    results: dict = field(default_factory=dict)
    overall: Optional[Verdict] = None
    timing: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "spec": self.spec_echo,
            "results": {k: v.to_dict() for k, v in self.results.items()},
            "overall": self.overall.to_dict() if self.overall else None,
            "timing": dict(self.timing),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CheckReport":
        return cls(
            spec_echo=d["spec"],
            results={k: Verdict.from_dict(v) for k, v in d["results"].items()},
            overall=Verdict.from_dict(d["overall"]) if d.get("overall") else None,
            timing=dict(d.get("timing", {})),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "CheckReport":
        return cls.from_dict(json.loads(text))

    @property
    def exit_code(self) -> int:
        return self.overall.exit_code

    def to_text(self) -> str:
        lines = [f"overall: {self.overall.status.value}  ({self.overall.reason})"]
        width = max(len(k) for k in self.results) if self.results else 0
        for name, v in self.results.items():
            t = f"  [{self.timing[name]:.3f}s]" if name in self.timing else ""
            lines.append(f"  {name:<{width}}  {v.status.value:<20} {v.reason}{t}")
        return "\n".join(lines)


class _Stages:
    def __init__(self, report: CheckReport, timing: bool):
        self.report = report
        self.timing = timing

    def run(self, name, fn, *args, **kw) -> Verdict:
        t0 = time.perf_counter()
        v = fn(*args, **kw)
        if self.timing:
            self.report.timing[name] = round(time.perf_counter() - t0, 6)
        self.report.results[name] = v
        return v


def _q_pipeline(spec: RatioSpec, opts: CheckOptions, st: _Stages) -> Verdict:
    cfg = specfun.EvalConfig(rel_tol=opts.rel_tol)
    support = st.run("support_inclusion", qlattice.support_inclusion, spec)
    if support.is_false:
        st.report.results["mass_condition"] = Verdict.inconclusive("skipped: support inclusion fails")
        log2 = support
    else:
        mass = st.run("mass_condition", qlattice.mass_condition, spec, opts.k_max)
        log2 = conjunction([("support_inclusion", support), ("mass_condition", mass)])
    st.report.results["log2_cm"] = log2
    lcm_cond = st.run("lcm_condition", qmonotone.lcm_condition, spec)
    lcm = conjunction([("log2_cm", log2), ("lcm_condition", lcm_cond)])
    st.report.results["lcm_q"] = lcm
    try:
        boundary = st.run("bernstein_boundary", qmonotone.bernstein_condition, spec, cfg)
        st.report.results["bernstein_q"] = conjunction([("log2_cm", log2), ("boundary", boundary)])
    except DomainError as exc:
        st.report.results["bernstein_q"] = Verdict.inconclusive(f"not applicable: {exc}")
    st.run("abprime_sufficient", qlattice.abprime_sufficient, spec)
    if all(f.scale == 1 for f in spec.numerator + spec.denominator):
        st.run("fq_example1", qmonotone.check_fq_example1, spec, opts.n_max)
    return lcm


def _classical_pipeline(spec: RatioSpec, opts: CheckOptions, st: _Stages) -> Verdict:
    grid = classical.GridConfig(points=opts.grid_points, u_max=opts.u_max)
    st.run("balance", classical.balance, spec)
    nec = st.run("necessary", classical.necessary_conditions, spec)
    theta = st.run("theta", classical.theta_vs_rho, spec)
    t0 = time.perf_counter()
    fams = classical.sufficient_families(spec)
    certified = [k for k, v in fams.items() if v.is_true]
    st.report.results["sufficient_families"] = (
        Verdict.true(f"Q >= 0 certified by {', '.join(certified)}", **fams)
        if certified
        else Verdict.inconclusive("no sufficient family applies", **fams)
    )
    if opts.timing:
        st.report.timing["sufficient_families"] = round(time.perf_counter() - t0, 6)
    grid_v = st.run("q_nonneg_grid", classical.q_nonneg, spec, grid)
    if nec.is_false:
        return Verdict.false(f"necessary: {nec.reason}", failed="necessary", necessary=nec)
    if theta.is_false:
        return Verdict.false(f"theta_rho: {theta.reason}", failed="theta_rho", theta_rho=theta)
    if certified:
        q = Verdict.true(f"certified by {certified[0]}", family=certified[0])
    else:
        q = grid_v
    return conjunction([("necessary", nec), ("theta_rho", theta), ("q_nonneg", q)])


def run_check(spec: RatioSpec, opts: CheckOptions = CheckOptions()) -> CheckReport:
    report = CheckReport(spec_echo=spec.to_dict())
    st = _Stages(report, opts.timing)
    t0 = time.perf_counter()
    if spec.classical:
        overall = _classical_pipeline(spec, opts, st)
    else:
        overall = _q_pipeline(spec, opts, st)
    if opts.run_oracle:
        cfg = replace(oracle.DEFAULT, max_order=opts.max_order)
        ov = st.run("oracle", oracle.lcm_oracle, spec, cfg)
        clash = oracle.cross_validate(overall, ov)
        if clash:
            report.results["oracle"] = Verdict(ov.status, f"{ov.reason}; {clash}", ov.witness)
    report.overall = overall
    if opts.timing:
        report.timing["total"] = round(time.perf_counter() - t0, 6)
    return report
