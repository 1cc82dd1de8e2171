"""Command-line entry point: ``gdsbp {build,decode,memory,singleshot,fit}``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .codes import (
    GB_CASE1_SPEC,
    QuasiCyclicSpec,
    code_from_spec,
    qc_girth,
    quasi_cyclic,
    random_qc_search,
)
from .decoder import DecoderConfig, GdsDecoder, alpha_sweep
from .experiments import (
    DEFAULT_FAILURES,
    DEFAULT_MAX_CYCLES,
    LifetimeConfig,
    SingleShotConfig,
    ansatz_fit,
    memory_run,
    read_records,
    records_to_csv,
    single_shot_run,
    write_config_sidecar,
)
from .matrices import (
    FormatError,
    QuaternaryCheckMatrix,
    TannerGraph,
    dumps_chk,
    dumps_gds,
    export_dot,
    gds_repeated,
    gds_with_readout,
    girth,
    read_matrix,
    single_shot_matrix,
)
from .noise import NoiseModel

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INFEASIBLE = 3


class UsageError(Exception):
    pass


class Infeasible(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# shared option groups


def _add_noise(p):
    p.add_argument("--epsilon", type=float, nargs="+", default=None, help="data error rate(s)")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--epsilon-b", type=float, default=None, help="syndrome flip rate")
    g.add_argument("--eta", type=float, default=None, help="flip rate as a multiple of epsilon")


def _add_decoder(p):
    p.add_argument("--tmax", type=int, default=None)
    p.add_argument("--alpha", type=float, default=None, help="single alpha (disables the sweep)")
    p.add_argument("--alpha-start", type=float, default=None)
    p.add_argument("--alpha-end", type=float, default=None)
    p.add_argument("--alpha-step", type=float, default=0.01)
    p.add_argument("--schedule", choices=("parallel", "serial"), default=None)
    p.add_argument("--fixed-init", type=float, default=None, metavar="EPS0")


def _add_campaign(p):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=10**6, help="trial cap per point")
    p.add_argument("--failure-target", type=int, default=DEFAULT_FAILURES)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", type=Path, default=None, help="CSV path (stdout if omitted)")
    p.add_argument("--record-time", action="store_true", help="fill wall_ms (breaks byte-identical output)")


def _decoder_cfg(args, default: DecoderConfig) -> DecoderConfig:
    if args.alpha is not None:
        alpha = args.alpha
    elif args.alpha_start is not None or args.alpha_end is not None:
        start = args.alpha_start if args.alpha_start is not None else default.alphas[0]
        end = args.alpha_end if args.alpha_end is not None else default.alphas[-1]
        alpha = alpha_sweep(start, end, args.alpha_step)
    else:
        alpha = default.alpha
    return DecoderConfig(
        t_max=args.tmax if args.tmax is not None else default.t_max,
        alpha=alpha,
        schedule=args.schedule or default.schedule,
        fixed_init=args.fixed_init,
    )


def _flip_rate(args, eps: float) -> float:
    if args.eta is not None:
        return args.eta * eps
    if args.epsilon_b is not None:
        return args.epsilon_b
    return None


def _parse_base(text: str):
    rows = [r for r in text.replace(",", " ").split(";") if r.strip()]
    try:
        return [[int(v) for v in r.split()] for r in rows]
    except ValueError as exc:
        raise UsageError(f"bad base matrix {text!r}") from exc


def _qc_spec(args) -> QuasiCyclicSpec:
    if args.base is None:
        return GB_CASE1_SPEC
    if args.c is None:
        raise UsageError("--base needs --c")
    return QuasiCyclicSpec.from_base(_parse_base(args.base), args.c)


def _write(path: Path | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        path.write_text(text)


# ---------------------------------------------------------------------------
# build


def cmd_build(args) -> int:
    target = args.target
    if target == "qc":
        spec = _qc_spec(args)
        a = quasi_cyclic(spec)
        if args.girth:
            print(int(g) if (g := qc_girth(spec, args.with_identity)) != float("inf") else "inf")
        if args.out:
            mat = np.hstack([a, np.eye(a.shape[0], dtype=np.uint8)]) if args.with_identity else a
            args.out.write_text("\n".join("".join(map(str, r)) for r in mat) + "\n")
        if args.spec_out:
            args.spec_out.write_text(spec.to_text())
        return EXIT_OK
    if target == "search":
        if None in (args.gamma, args.rho, args.c):
            raise UsageError("search needs --gamma, --rho and --c")
        spec = random_qc_search(args.gamma, args.rho, args.c, args.girth_target, args.attempts, args.seed, args.zero_blocks)
        if spec is None:
            print(f"no base matrix with girth >= {args.girth_target} in {args.attempts} attempts", file=sys.stderr)
            return EXIT_INFEASIBLE
        _write(args.out, spec.to_text())
        return EXIT_OK
    if target == "singleshot":
        code = code_from_spec(args.code)
        pair = single_shot_matrix(code.h, quasi_cyclic(_qc_spec(args)))
        out_dir = args.out or Path(".")
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / f"{code.name}_measurement.gds").write_text(dumps_gds(pair.measurement))
        (out_dir / f"{code.name}_decoding.gds").write_text(dumps_gds(pair.decoding))
        print(f"decoding matrix {pair.decoding.m_prime}x({pair.decoding.n_quaternary}+{pair.decoding.m_binary})")
        if args.girth:
            g = girth(pair.decoding.tanner_graph)
            print(int(g) if g != float("inf") else "inf")
        return EXIT_OK

    code = code_from_spec(target)
    if args.rounds:
        mat = gds_with_readout(code.h, args.rounds) if args.readout else gds_repeated(code.h, args.rounds)
        text = dumps_gds(mat)
        graph = mat.tanner_graph
    else:
        text = dumps_chk(code.h, [f"{code.name}: n={code.n} k={code.k} rank={code.n - code.k}"])
        graph = TannerGraph.from_matrix(code.h.as_gds())
    _write(args.out, text)
    if args.girth:
        g = girth(graph)
        print(int(g) if g != float("inf") else "inf", file=sys.stderr if args.out is None else sys.stdout)
    if args.dot:
        args.dot.write_text(export_dot(graph, code.name))
    return EXIT_OK


# ---------------------------------------------------------------------------
# decode


def _parse_bits(text: str) -> np.ndarray:
    text = text.strip()
    if not text or set(text) - {"0", "1"}:
        raise FormatError(f"syndrome must be a 0/1 string, got {text!r}")
    return np.array([int(c) for c in text], dtype=np.uint8)


def cmd_decode(args) -> int:
    mat = read_matrix(args.matrix)
    h = mat.as_gds() if isinstance(mat, QuaternaryCheckMatrix) else mat
    s = _parse_bits(args.syndrome)
    if s.size != h.m_prime:
        raise FormatError(f"syndrome has {s.size} bits, matrix has {h.m_prime} checks")
    eps = args.epsilon[0] if args.epsilon else 0.01
    eps_b = _flip_rate(args, eps)
    eps_b = eps if eps_b is None else eps_b
    cfg = _decoder_cfg(args, DecoderConfig(t_max=50, alpha=alpha_sweep(1.2, 0.3), schedule="parallel"))
    init = cfg.priors(h.n_quaternary, h.m_binary, eps, eps_b)
    out = GdsDecoder(h, cfg).decode(s, init)
    print(f"converged: {'yes' if out.converged else 'no'}")
    print(f"iterations: {out.iterations_used}")
    print(f"alpha_star: {out.alpha_star if out.alpha_star is not None else '-'}")
    print(f"estimate: {out.estimate.pauli_part}" + (f" {''.join(map(str, out.estimate.bit_part))}" if h.m_binary else ""))
    if args.dump_llrs:
        for j, row in enumerate(out.final_llrs.quaternary):
            print(f"llr E{j + 1} " + " ".join(f"{v:.6g}" for v in row))
        for j, v in enumerate(out.final_llrs.binary):
            print(f"llr e{j + 1} {v:.6g}")
    return EXIT_OK if out.converged else EXIT_INFEASIBLE if args.strict else EXIT_OK


# ---------------------------------------------------------------------------
# campaigns


def _cfg_summary(tag: str, cfg: DecoderConfig) -> dict:
    a = cfg.alphas
    alpha = f"{a[0]:g}" if len(a) == 1 else f"{a[0]:g}..{a[-1]:g} ({len(a)} values)"
    return {
        f"{tag}.tmax": cfg.t_max,
        f"{tag}.schedule": cfg.schedule,
        f"{tag}.alpha": alpha,
        f"{tag}.llr_clamp": cfg.llr_clamp,
        f"{tag}.fixed_init": cfg.fixed_init,
    }


def _resolved(args, extra: dict) -> dict:
    skip = {"func", "config", "out", "record_time"}
    vals = {k: v for k, v in vars(args).items() if k not in skip}
    vals.update(extra)
    return {k: (" ".join(map(str, v)) if isinstance(v, (list, tuple)) else v) for k, v in vals.items()}


def _finish(args, records, extra) -> int:
    text = records_to_csv(records)
    _write(args.out, text)
    if args.out is not None:
        write_config_sidecar(args.out, _resolved(args, extra))
    return EXIT_OK


def _rates(args, default_eps):
    eps_list = args.epsilon or default_eps
    pairs = []
    for eps in eps_list:
        eps_b = _flip_rate(args, eps)
        pairs.append((eps, eps if eps_b is None else eps_b))
    return pairs


def cmd_memory(args) -> int:
    records = []
    extra = {}
    for spec in args.code:
        code = code_from_spec(spec)
        default = DecoderConfig.toric_default() if spec.startswith("toric:") else DecoderConfig.gb_default()
        cfg = _decoder_cfg(args, default)
        extra.update(_cfg_summary(f"decoder.{spec}", cfg))
        for eps, eps_b in _rates(args, [0.01]):
            lc = LifetimeConfig(
                code=code,
                noise=NoiseModel(eps, eps_b, args.rounds),
                d0=cfg,
                max_cycles=args.max_cycles,
                seed=args.seed,
                archive=args.archive is not None,
            )
            rec, agg = memory_run(lc, args.trials, args.failure_target or None, args.workers, args.record_time)
            records.append(rec)
            if args.archive is not None:
                args.archive.mkdir(parents=True, exist_ok=True)
                for k, txt in enumerate(agg.archives):
                    (args.archive / f"{code.name}_eps{eps:g}_{k}.txt").write_text(txt)
    return _finish(args, records, extra)


def _perfect_h(choice: str, spec: str, code):
    # the truncated GB matrix decodes perfect syndromes with its redundant parent by default
    if choice == "auto":
        return code_from_spec("gb126-full").h if spec == "gb126" else code.h
    if choice == "same":
        return code.h
    return code_from_spec(choice).h


def cmd_singleshot(args) -> int:
    records = []
    extra = {}
    spec_qc = _qc_spec(args)
    for spec in args.code:
        code = code_from_spec(spec)
        pair = single_shot_matrix(code.h, quasi_cyclic(spec_qc))
        cfg = _decoder_cfg(args, DecoderConfig.gb_default())
        extra.update(_cfg_summary(f"decoder.{spec}", cfg))
        extra["qc"] = spec_qc.to_text().replace("\n", "; ").strip("; ")
        plain = _perfect_h(args.perfect_code, spec, code)
        extra[f"perfect_code.{spec}"] = f"{plain.m}x{plain.n}"
        for eps, eps_b in _rates(args, [0.01]):
            sc = SingleShotConfig(code, pair, eps, eps_b, cfg, args.seed, perfect_h=plain)
            rec, _ = single_shot_run(sc, args.trials, args.failure_target or None, args.workers, args.record_time)
            records.append(rec)
    return _finish(args, records, extra)


def cmd_fit(args) -> int:
    points = []
    for path in args.csv:
        for rec in read_records(path):
            points.append((rec.d, rec.epsilon, rec.metric))
    nu = np.round(np.arange(args.nu_min, args.nu_max + 1e-12, args.nu_step), 10)
    tau = np.round(np.arange(args.tau_min, args.tau_max + 1e-12, args.tau_step), 10)
    if nu.size == 0 or tau.size == 0:
        raise Infeasible("empty fitting grid")
    try:
        fit = ansatz_fit(points, nu, tau)
    except ValueError as exc:
        raise Infeasible(str(exc)) from exc
    print(f"nu={fit.nu:.2f} tau={fit.tau:.4f} mse={fit.mse:.6g}")
    print("coefficients=" + " ".join(f"{c:.6g}" for c in fit.coefficients))
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gdsbp", description="Data-syndrome belief-propagation decoding toolkit.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--config", type=Path, default=None, help="key=value file; flags override it")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("build", help="write check matrices, QC specs and graphs")
    b.add_argument("target", help="toric:L | gb126 | gb126-full | FILE:k | qc | singleshot | search")
    b.add_argument("--out", type=Path, default=None)
    b.add_argument("--rounds", type=int, default=0, help="write the repeated-round GDS matrix")
    b.add_argument("--readout", action="store_true")
    b.add_argument("--girth", action="store_true")
    b.add_argument("--dot", type=Path, default=None)
    b.add_argument("--base", default=None, help='rows separated by ";", e.g. "5 3 13;9 1 10"')
    b.add_argument("--c", type=int, default=None, help="circulant size")
    b.add_argument("--with-identity", action="store_true")
    b.add_argument("--spec-out", type=Path, default=None)
    b.add_argument("--code", default="gb126")
    b.add_argument("--gamma", type=int, default=None)
    b.add_argument("--rho", type=int, default=None)
    b.add_argument("--girth-target", type=int, default=8)
    b.add_argument("--attempts", type=int, default=1000)
    b.add_argument("--zero-blocks", type=int, default=0)
    b.add_argument("--seed", type=int, default=0)
    b.set_defaults(func=cmd_build)

    d = sub.add_parser("decode", help="decode one syndrome")
    d.add_argument("matrix", type=Path)
    d.add_argument("--syndrome", required=True)
    _add_noise(d)
    _add_decoder(d)
    d.add_argument("--dump-llrs", action="store_true")
    d.add_argument("--strict", action="store_true", help="exit 3 when the decoder does not converge")
    d.set_defaults(func=cmd_decode)

    m = sub.add_parser("memory", help="memory lifetime campaign")
    m.add_argument("--code", nargs="+", default=["toric:4"])
    _add_noise(m)
    m.add_argument("--rounds", type=int, default=3)
    m.add_argument("--max-cycles", type=int, default=DEFAULT_MAX_CYCLES)
    m.add_argument("--archive", type=Path, default=None, help="directory for failing-cycle dumps")
    _add_decoder(m)
    _add_campaign(m)
    m.set_defaults(func=cmd_memory)

    s = sub.add_parser("singleshot", help="single-shot block error campaign")
    s.add_argument("--code", nargs="+", default=["gb126"])
    s.add_argument("--base", default=None)
    s.add_argument("--c", type=int, default=None)
    s.add_argument("--perfect-code", default="auto",
                   help="matrix for epsilon_b = 0: auto | same | code spec")
    _add_noise(s)
    _add_decoder(s)
    _add_campaign(s)
    s.set_defaults(func=cmd_singleshot)

    f = sub.add_parser("fit", help="finite-size scaling fit of CSV results")
    f.add_argument("csv", type=Path, nargs="+")
    f.add_argument("--nu-min", type=float, default=1.0)
    f.add_argument("--nu-max", type=float, default=2.0)
    f.add_argument("--nu-step", type=float, default=0.01)
    f.add_argument("--tau-min", type=float, default=0.02)
    f.add_argument("--tau-max", type=float, default=0.04)
    f.add_argument("--tau-step", type=float, default=1e-4)
    f.set_defaults(func=cmd_fit)
    return p


def read_config(path: Path) -> dict:
    """Flat ``key=value`` lines; ``#`` starts a comment."""
    out = {}
    for ln, raw in enumerate(path.read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise FormatError(f"{path}:{ln}: expected key=value")
        k, v = (t.strip() for t in line.split("=", 1))
        out[k.replace("-", "_")] = v
    return out


def _config_argv(cfg: dict, sub: argparse.ArgumentParser) -> list[str]:
    """Turn config entries into flags placed before the user's own flags."""
    known = {a.dest: a for a in sub._actions}
    argv = []
    for k, v in cfg.items():
        act = known.get(k)
        if act is None or not act.option_strings:
            raise UsageError(f"unknown config key {k!r}")
        flag = act.option_strings[-1]
        if act.nargs == 0:
            if v.lower() in ("1", "true", "yes"):
                argv.append(flag)
        else:
            argv.append(flag)
            argv.extend(v.split() if act.nargs in ("+", "*") else [v])
    return argv


def main(argv=None) -> int:
    """Run the CLI and return the exit code."""
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        return _dispatch(parser, argv)
    except SystemExit as exc:
        # argparse exits on usage errors, --help and --version
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE


def _dispatch(parser, argv) -> int:
    try:
        args = parser.parse_args(argv)
        if args.config is not None:
            cfg = read_config(args.config)
            sub = parser._subparsers._group_actions[0].choices[args.command]
            cut = argv.index(args.command) + 1
            args = parser.parse_args(argv[:cut] + _config_argv(cfg, sub) + argv[cut:])
        return args.func(args)
    except UsageError as exc:
        print(f"gdsbp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Infeasible as exc:
        print(f"gdsbp: infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (FormatError, ValueError, OSError) as exc:
        print(f"gdsbp: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
