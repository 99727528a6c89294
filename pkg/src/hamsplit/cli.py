"""Experiment runner: `hamsplit run|scan-h|resonant-h|nf-verify|symplectic`.

Configuration is a single JSON document; command-line flags override
individual fields so experiment files stay reproducible.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .errors import BlowUpError
from .indices import as_mode
from .integrator import RunResult, SchemeSpec, run, symplecticity_defect
from .models import (FrequencyModel, NonlinearSpec, nls_model, paper_potential,
                     wave_model)
from .normalform import normalize, verify_order
from .resonance import find_resonant_h, scan_h
from .spectral import PhysicalField, State, from_physical, is_real_state
from . import integrator


@dataclass
class ExperimentConfig:
    model: str = "nls"
    K: int = 200
    d: int = 1
    potential: object = "paper"        # "paper" | "zero" | {a: Vhat_a}
    mass: float = 0.5                  # wave only
    nonlinearity: dict = field(default_factory=lambda: {"kind": "cubic"})
    eps: float = 0.1
    scaling: str = "coupling"          # "coupling" (eps^2 |psi|^2 psi) | "amplitude"
    scheme: str = "lie"
    h: float = 0.174
    n_steps: int = 10000
    record_every: int = 100
    seed: int = 0
    out: Optional[str] = None
    modes: Optional[List[int]] = None  # action columns; None = default rule

    def __post_init__(self):
        if self.K < 1 or self.d < 1 or self.h <= 0:
            raise ValueError("K, d must be >= 1 and h > 0")
        if self.n_steps < 0 or self.record_every < 1:
            raise ValueError("n_steps >= 0 and record_every >= 1 required")
        if not 0 < self.eps <= 1:
            raise ValueError("eps must lie in (0, 1]")
        if self.scaling not in ("coupling", "amplitude"):
            raise ValueError("scaling must be 'coupling' or 'amplitude'")

    @classmethod
    def load(cls, path: Optional[str], overrides: dict) -> "ExperimentConfig":
        data = {}
        if path:
            with open(path) as f:
                data = json.load(f)
        data.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**data)


def potential_fn(spec):
    if spec == "paper":
        return paper_potential
    if spec == "zero":
        return lambda a: 0.0
    if isinstance(spec, dict):
        table = {int(k): float(v) for k, v in spec.items()}
        return lambda a: table.get(a, table.get(abs(a), 0.0))
    raise ValueError(f"unknown potential spec {spec!r}")


def build_model(cfg: ExperimentConfig) -> FrequencyModel:
    if cfg.model == "wave":
        lam = cfg.nonlinearity.get("lambda", 1.0)
        return wave_model(cfg.K, cfg.mass,
                          g=lambda w: lam * w ** 2,
                          G=lambda w: lam * w ** 3 / 3.0)
    kind = cfg.nonlinearity.get("kind", "cubic")
    lam = cfg.nonlinearity.get("lambda")
    if lam is None:
        lam = cfg.eps ** 2 if cfg.scaling == "coupling" else 1.0
    if kind == "cubic":
        nonlin = NonlinearSpec.cubic(lam)
    elif kind == "general":
        terms = {tuple(int(x) for x in k.split(",")): complex(v)
                 for k, v in cfg.nonlinearity["terms"].items()}
        nonlin = NonlinearSpec.general(terms)
    else:
        raise ValueError(f"unknown nonlinearity kind {kind!r}")
    return nls_model(cfg.K, potential_fn(cfg.potential), nonlin)


def cmd_initial_state(cfg: ExperimentConfig,
                      model: FrequencyModel) -> State:
    """psi_0(x) = 2/(2 - cos x), sampled and transformed; under the
    "amplitude" convention the coefficients are scaled by eps."""
    if cfg.model != "nls":
        raise ValueError("initial state builder supports the NLS model only")
    s = model.index_set
    x = np.pi * np.arange(2 * cfg.K) / cfg.K
    psi = 2.0 / (2.0 - np.cos(x))
    xi = from_physical(PhysicalField(psi.astype(complex), s))
    if cfg.scaling == "amplitude":
        xi = cfg.eps * xi
    return State.real_from_xi(s, xi)


def default_mode_columns(cfg: ExperimentConfig, model: FrequencyModel,
                         z0: State) -> List[int]:
    """|a| <= 12 plus the 8 largest initial actions."""
    if cfg.modes is not None:
        return list(cfg.modes)
    modes = [a for (a,) in model.index_set.modes if abs(a) <= 12]
    I0 = np.abs(z0.actions())
    top = np.argsort(I0)[::-1][:8]
    for i in top:
        (a,) = model.index_set.modes[i]
        if a not in modes:
            modes.append(a)
    return sorted(modes)


def write_run_csv(path: str, result: RunResult, model: FrequencyModel,
                  mode_cols: List[int]):
    idx = [model.index_set.index_of((a,)) for a in mode_cols]
    with open(path, "w", newline="") as f:
        f.write("# t in model time units; actions I_a dimensionless\n")
        header = ["n", "t", "norm", "max_drift"] + [f"I_{a}" for a in mode_cols]
        f.write(",".join(header) + "\n")
        for rec in result.records:
            row = [str(rec.n), f"{rec.t:.17e}", f"{rec.norm:.17e}",
                   f"{rec.max_action_drift:.17e}"]
            row += [f"{rec.actions[i].real:.17e}" for i in idx]
            f.write(",".join(row) + "\n")


def cmd_run(cfg: ExperimentConfig) -> int:
    model = build_model(cfg)
    z0 = cmd_initial_state(cfg, model)
    scheme = SchemeSpec(kind=cfg.scheme, h=cfg.h, model=model)
    try:
        result = run(z0, scheme, cfg.n_steps, cfg.record_every)
    except BlowUpError as err:
        print(f"blow-up at step {err.step}", file=sys.stderr)
        return 2
    out = cfg.out or "run.csv"
    write_run_csv(out, result, model, default_mode_columns(cfg, model, z0))
    print(f"wrote {len(result.records)} records to {out}")
    return 0


def cmd_scan_h(cfg: ExperimentConfig, args) -> int:
    model = build_model(cfg)
    report = scan_h(model, r=args.r, K=None, h_max=args.h_max,
                    alpha_star=args.alpha_star, gamma_star=args.gamma_star,
                    n_samples=args.n_samples, seed=cfg.seed)
    if cfg.out:
        report.write_csv(cfg.out)
    print(report.summary_json())
    return 0


def cmd_resonant_h(cfg: ExperimentConfig, args) -> int:
    model = build_model(cfg)
    h = find_resonant_h(model, args.a, args.b)
    print(f"{h:.6f}")
    return 0


def cmd_nf_verify(cfg: ExperimentConfig, args) -> int:
    model = build_model(cfg)
    eps_list = [1e-2, 5e-3, 2.5e-3]
    raw = verify_order(model, None, cfg.h, eps_list, seed=cfg.seed)
    nf = normalize(model, args.r, cfg.h)
    slope = verify_order(model, nf, cfg.h, eps_list, seed=cfg.seed)
    summary = {"r": args.r, "h": cfg.h, "raw_slope": raw,
               "normalized_slope": slope}
    print(json.dumps(summary, indent=2, sort_keys=True))
    if cfg.out:
        with open(cfg.out, "w") as f:
            f.write(nf.to_json())
    return 0


def cmd_symplectic(cfg: ExperimentConfig, args) -> int:
    model = build_model(cfg)
    rng = np.random.default_rng(cfg.seed)
    n = len(model.index_set)
    xi = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    z = State.real_from_xi(model.index_set, xi)
    z = State(model.index_set, z.xi * (args.norm / z.norm()),
              z.eta * (args.norm / z.norm()))
    scheme = SchemeSpec(kind=cfg.scheme, h=cfg.h, model=model)
    step = (integrator.lie_step if cfg.scheme == "lie"
            else integrator.strang_step)
    defect = symplecticity_defect(lambda s: step(s, scheme), z, args.fd_eps)
    print(json.dumps({"scheme": cfg.scheme, "h": cfg.h,
                      "defect": defect}, indent=2, sort_keys=True))
    return 0


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hamsplit")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", default=None)
        sp.add_argument("--h", type=float, default=None)
        sp.add_argument("--eps", type=float, default=None)
        sp.add_argument("--steps", type=int, default=None, dest="n_steps")
        sp.add_argument("--out", default=None)
        sp.add_argument("--K", type=int, default=None)
        sp.add_argument("--scheme", default=None)
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--scaling", default=None)

    sp = sub.add_parser("run");  common(sp)
    sp = sub.add_parser("scan-h"); common(sp)
    sp.add_argument("--r", type=int, default=3)
    sp.add_argument("--h-max", type=float, default=1.0, dest="h_max")
    sp.add_argument("--alpha-star", type=float, default=0.0, dest="alpha_star")
    sp.add_argument("--gamma-star", type=float, default=0.0, dest="gamma_star")
    sp.add_argument("--n-samples", type=int, default=1000, dest="n_samples")
    sp = sub.add_parser("resonant-h"); common(sp)
    sp.add_argument("--a", type=int, required=True)
    sp.add_argument("--b", type=int, required=True)
    sp = sub.add_parser("nf-verify"); common(sp)
    sp.add_argument("--r", type=int, default=3)
    sp = sub.add_parser("symplectic"); common(sp)
    sp.add_argument("--fd-eps", type=float, default=1e-5, dest="fd_eps")
    sp.add_argument("--norm", type=float, default=0.1)
    return p


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    overrides = {k: getattr(args, k, None)
                 for k in ("h", "eps", "n_steps", "out", "K", "scheme",
                           "seed", "scaling")}
    try:
        cfg = ExperimentConfig.load(args.config, overrides)
    except (OSError, json.JSONDecodeError, TypeError, ValueError) as err:
        print(f"config error: {err}", file=sys.stderr)
        return 64
    if args.command == "run":
        return cmd_run(cfg)
    if args.command == "scan-h":
        return cmd_scan_h(cfg, args)
    if args.command == "resonant-h":
        return cmd_resonant_h(cfg, args)
    if args.command == "nf-verify":
        return cmd_nf_verify(cfg, args)
    if args.command == "symplectic":
        return cmd_symplectic(cfg, args)
    return 64


if __name__ == "__main__":
    sys.exit(main())
