"""Batch entry point: ``ueiqc <subcommand> [flags]``.

Exit status: 0 success, 2 parameter fault, 3 aborted session (simulate).
Stochastic outputs start with ``# command:`` and ``# config_sha256:``
lines; running the embedded command reproduces the output byte for byte.
"""
from __future__ import annotations

import argparse
import hashlib
import os
import shlex
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from pathlib import Path

from . import analysis
from .adversary import AttackReport, InterceptResend, NoAttack, intercept_resend_trial
from .codes import census_uncorrectable, get_code, load_catalog, validate_code
from .frames import ChannelModel, FrameStats, frame_trials
from .pauli import to_label
from .protocol import (SessionConfig, SessionConfigError, config_to_dict,
                       exit_status, format_transcript, load_config,
                       message_ensemble, run_session)
from .keys import keygen
from .report import RENDERERS
from .rng import substream
from .statevector import StateVector, H

THREADS_ENV = "UEIQC_THREADS"
MC_CHUNK = 1 << 20
ATTACK_CHUNK = 4096
ATTACKS = {"none": None, "uniform-coset": "uniform-coset",
           "copy-rep": "copy-syndrome-representative", "measure-forward": "measure-forward"}


class ParameterFault(Exception):
    pass


def _workers(args) -> int:
    if getattr(args, "workers", None):
        return args.workers
    return int(os.environ.get(THREADS_ENV, "1"))


def _map(fn, items, workers):
    if workers <= 1:
        return [fn(i) for i in items]
    with ThreadPoolExecutor(workers) as pool:
        return list(pool.map(fn, items))


def _canonical_command(args, keys) -> str:
    parts = [args.command]
    for key in keys:
        value = getattr(args, key)
        if value is None or value is False:
            continue
        flag = "--" + key.replace("_", "-")
        parts += [flag] if value is True else [flag, str(value)]
    return shlex.join(parts + ["--format", args.format])


def _header(args, keys) -> str:
    cmd = _canonical_command(args, keys)
    digest = hashlib.sha256(cmd.encode()).hexdigest()[:16]
    return f"# command: {cmd}\n# seed: {args.seed}\n# config_sha256: {digest}\n"


def _emit(args, data: dict, header: str = "") -> None:
    text = header + RENDERERS[args.format](data) + "\n"
    if getattr(args, "out", None):
        Path(args.out).write_text(text)
    sys.stdout.write(text)


def _bits(b) -> str:
    return "".join(map(str, b))


# -- subcommands ------------------------------------------------------------

def _session_config(args) -> SessionConfig:
    if args.config:
        cfg = load_config(args.config)
        return replace(cfg, seed=args.seed) if args.seed is not None else cfg
    if args.seed is None:
        raise ParameterFault("--seed is required")
    policy = ATTACKS[args.attack]
    adversary = NoAttack() if policy is None else InterceptResend(policy)
    return SessionConfig(code=args.code, k_prime=args.kprime,
                         hop_p=(args.p,) * (args.relays + 1), seed=args.seed,
                         exclude_zero_syndrome=args.exclude_zero_syndrome,
                         adversary=adversary)


def _payload(kind: str, k_prime: int):
    if kind == "random":
        return None
    if kind == "zero":
        return StateVector.zero(k_prime)
    plus = StateVector(H @ [1, 0], 1)
    state = plus
    for _ in range(k_prime - 1):
        from .statevector import tensor
        state = tensor(state, plus)
    return state


SIM_KEYS = ("config", "code", "kprime", "p", "relays", "attack", "payload",
            "exclude_zero_syndrome", "seed")


def cmd_simulate(args) -> int:
    cfg = _session_config(args)
    report = run_session(cfg, _payload(args.payload, cfg.k_prime))
    data = {
        "session": config_to_dict(cfg),
        "config_digest": cfg.digest(),
        "outcome": report.outcome,
        "abort_reason": report.abort_reason.value if report.abort_reason else None,
        "fidelity": report.fidelity,
        "hop_syndromes": [_bits(s) for s in report.hop_syndromes],
        "adversary_detected": report.adversary_detected,
        "messages": len(report.transcript),
        "oracle": {
            "e_un": to_label(report.oracle.e_un),
            "hop_errors": [to_label(e) for e in report.oracle.hop_errors],
            "undetected_logical_failure": report.undetected_logical_failure,
        },
    }
    header = _header(args, SIM_KEYS)
    if args.transcript:
        Path(args.transcript).write_text(header + format_transcript(report.transcript))
    _emit(args, data, header)
    return exit_status(report)


MC_KEYS = ("code", "p", "trials", "seed")


def cmd_montecarlo(args) -> int:
    spec = get_code(args.code)
    model = ChannelModel(args.p)
    chunks = range(-(-args.trials // MC_CHUNK))

    def run(i):
        size = min(MC_CHUNK, args.trials - i * MC_CHUNK)
        return frame_trials(spec, model, substream(args.seed, "montecarlo", i), size)

    stats = sum(_map(run, chunks, _workers(args)), FrameStats(0, 0))
    analytic = float(analysis.logical_error_rate(spec.n, spec.t, args.p))
    sigma = (analytic * (1 - analytic) / stats.trials) ** 0.5
    data = {
        "code": str(spec),
        "p": args.p,
        "trials": stats.trials,
        "failures": stats.failures,
        "empirical_p_L": stats.rate,
        "analytic_p_L": analytic,
        "sigma": sigma,
        "z_score": (stats.rate - analytic) / sigma if sigma else 0.0,
        "within_3_sigma": abs(stats.rate - analytic) <= 3 * sigma,
    }
    _emit(args, data, _header(args, MC_KEYS))
    return 0


ATTACK_KEYS = ("config", "code", "kprime", "attack", "p", "relays", "backend", "trials", "seed")


def cmd_attack(args) -> int:
    if args.trials < 1:
        raise ParameterFault("--trials must be >= 1")
    cfg = _session_config(args)
    blocks = range(-(-args.trials // ATTACK_CHUNK))

    def run(b):
        total = AttackReport()
        for i in range(b * ATTACK_CHUNK, min(args.trials, (b + 1) * ATTACK_CHUNK)):
            total = total + AttackReport.from_trial(intercept_resend_trial(cfg, None, args.backend, i))
        return total

    report = sum(_map(run, blocks, _workers(args)), AttackReport())
    spec = cfg.spec()
    from math import comb
    data = {
        "session": config_to_dict(cfg),
        "backend": args.backend,
        "report": report.as_dict(),
        "reference": {
            "logical_class_match": 2.0 ** (-2 * spec.k),
            "position_guess": 1 / comb(spec.k, cfg.k_prime),
        },
    }
    _emit(args, data, _header(args, ATTACK_KEYS))
    return 0


def cmd_overhead(args) -> int:
    r = analysis.teleport_overhead(args.N, args.Na, args.nbsm)
    pl = analysis.p_L_bound(r.N_T, args.p) if r.N_T > 0 else None
    data = {
        "teleportation": {
            "nodes": r.nodes, "N_EP": r.N_EP, "O_ES": r.O_ES,
            "bsm_ancillas": r.bsm_ancillas, "P_succ": r.P_succ,
            "repetitions": r.repetitions, "N_T": r.N_T,
        },
        "encoded_transmission": {
            "n": r.N_T, "p": args.p,
            "t": r.N_T // 8 if r.N_T else None,
            "p_L_bound": pl,
        },
        "comparison_only": {
            "teleport_infidelity_reference": analysis.TELEPORT_INFIDELITY_REFERENCE,
            "note": "reference depends on an external purification model; not computed here",
            "p_L_56_63_reference": analysis.PL_56_63_REFERENCE,
            "candidates": [
                {"n": c.n, "convention": c.convention, "t": c.t, "p_L": c.p_L}
                for c in analysis.p_L_candidates(args.p)
            ],
            "reference_matched_by": [
                {"n": n, "t": t, "p_L": v}
                for n, t, v in analysis.match_logical_error_rate(analysis.PL_56_63_REFERENCE, args.p, 128)
            ],
        },
    }
    _emit(args, data)
    return 0


def cmd_nu(args) -> int:
    data = {}
    if args.code:
        spec = get_code(args.code)
        est = analysis.nu_estimate(spec.n, spec.k, spec.t)
        data["code"] = str(spec)
        data["estimate"] = float(est)
        data["estimate_exact"] = est
        if args.exact:
            census = census_uncorrectable(spec)
            counts = sorted({s.uncorrectable for s in census.per_syndrome})
            data["exact"] = {
                "nu_exact": census.nu_exact,
                "uncorrectable_per_syndrome": counts,
                "total_classes": census.total_classes,
                "syndromes": len(census.per_syndrome),
            }
    if args.n:
        data["bound"] = {"n": args.n, "R": args.R, "nu_bound": analysis.nu_bound(args.n, args.R)}
    data["crossover"] = {"asymptotic_R": analysis.nu_crossover()}
    if args.curve:
        rates = [round(i * args.rstep, 10) for i in range(1, int(round(1 / args.rstep)))]
        rows = analysis.nu_curve(range(1, args.nmax + 1), rates)
        with open(args.curve, "w") as fh:
            analysis.write_nu_csv(rows, fh)
        data["curve"] = {"path": args.curve, "rows": len(rows)}
    _emit(args, data)
    return 0


ACC_KEYS = ("code", "kprime", "epsilon", "n", "seed")


def cmd_accinfo(args) -> int:
    spec = get_code(args.code)
    if not 1 <= args.kprime < spec.k:
        raise ParameterFault(f"k' must satisfy 1 <= k' < {spec.k}")
    keys = keygen(spec.k, args.kprime, substream(args.seed, "accinfo"))
    import numpy as np
    states = []
    worst = 0.0
    for psi in message_ensemble(spec, keys):
        rho = analysis.pauli_twirl(np.outer(psi.amps, psi.amps.conj()), spec.n)
        worst = max(worst, float(np.max(np.abs(rho - np.eye(1 << spec.n) / (1 << spec.n)))))
        states.append(analysis.EavesdropperState(spec.n, rho))
    n = args.n or spec.n
    data = {
        "code": str(spec),
        "messages": len(states),
        "twirl_max_deviation": worst,
        "holevo_bits": analysis.holevo_bound(states),
        "acc_info_bound": {"epsilon": args.epsilon, "n": n,
                           "bits": analysis.acc_info_bound(args.epsilon, n)},
    }
    _emit(args, data, _header(args, ACC_KEYS))
    return 0


def cmd_validate(args) -> int:
    catalog = load_catalog(args.catalog)
    names = [get_code(args.code, args.catalog).name] if args.code else list(catalog)
    data = {}
    for name in names:
        r = validate_code(catalog[name])
        data[name] = {"n": catalog[name].n, "k": catalog[name].k, "distance": r.distance,
                      "non_degenerate": r.non_degenerate,
                      "correctable_syndromes": r.correctable_syndromes, "ok": r.ok}
    _emit(args, data)
    return 0


# -- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ueiqc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt="text"):
        p.add_argument("--format", choices=sorted(RENDERERS), default=fmt)
        p.add_argument("--out", help="also write the report here")

    def session_flags(p):
        p.add_argument("--config", help="session YAML file")
        p.add_argument("--code", default="833")
        p.add_argument("--kprime", type=int, default=1)
        p.add_argument("--p", type=float, default=0.0, help="depolarizing probability per hop")
        p.add_argument("--relays", type=int, default=0)
        p.add_argument("--attack", choices=sorted(ATTACKS), default="none")
        p.add_argument("--exclude-zero-syndrome", action="store_true")

    p = sub.add_parser("simulate", help="run one protocol session")
    session_flags(p)
    p.add_argument("--seed", type=int)
    p.add_argument("--payload", choices=("random", "zero", "plus"), default="random")
    p.add_argument("--transcript", help="write the classical transcript here")
    common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("montecarlo", help="Pauli-frame logical error rate")
    p.add_argument("--code", default="513")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--trials", type=int, default=10**6)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--workers", type=int)
    common(p)
    p.set_defaults(func=cmd_montecarlo)

    p = sub.add_parser("attack", help="intercept-and-resend campaign")
    session_flags(p)
    p.set_defaults(attack="uniform-coset")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--trials", type=int, default=10**4)
    p.add_argument("--backend", choices=("frame", "statevector"), default="frame")
    p.add_argument("--workers", type=int)
    common(p)
    p.set_defaults(func=cmd_attack)

    p = sub.add_parser("overhead", help="teleportation overhead and p_L comparison")
    p.add_argument("--N", type=int, default=2)
    p.add_argument("--Na", type=int, default=2)
    p.add_argument("--nbsm", type=int, default=2)
    p.add_argument("--p", type=float, default=0.01)
    common(p, "table")
    p.set_defaults(func=cmd_overhead)

    p = sub.add_parser("nu", help="uncorrectable-error census and estimates")
    p.add_argument("--code")
    p.add_argument("--exact", action="store_true")
    p.add_argument("--n", type=int)
    p.add_argument("--R", type=float, default=0.5)
    p.add_argument("--curve", help="write an n, R, nu_bound, log10_nu CSV here")
    p.add_argument("--nmax", type=int, default=100)
    p.add_argument("--rstep", type=float, default=0.01)
    common(p, "table")
    p.set_defaults(func=cmd_nu)

    p = sub.add_parser("accinfo", help="twirled eavesdropper states and information bounds")
    p.add_argument("--code", default="833")
    p.add_argument("--kprime", type=int, default=1)
    p.add_argument("--epsilon", type=float, default=0.01)
    p.add_argument("--n", type=int)
    p.add_argument("--seed", type=int, default=0)
    common(p)
    p.set_defaults(func=cmd_accinfo)

    p = sub.add_parser("validate", help="check the code catalog")
    p.add_argument("--code")
    p.add_argument("--catalog")
    common(p, "table")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParameterFault, SessionConfigError, KeyError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"ueiqc {args.command}: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
