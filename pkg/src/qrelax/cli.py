"""Command-line entry point.

Exit codes: 0 success, 1 invalid input, 2 numerical tolerance failure.

Examples::

    qrelax chi --gate sqisw --t1 20 --t2 15 --tgate 1 --n 100 --out chi.json --format json
    qrelax negativity --gate sqisw --t1 20 --t2 15 --n 200 --out neg.csv
    qrelax plate-purity --spectrum all --fwhm 0.02 --lambda0 0.8 --delta-n 0.009 \\
        --alpha 0.3927 --h-min 1 --h-max 3000 --steps 300 --out fig4.csv
    qrelax plate-chi --spectrum gauss --fwhm 0.02 --lambda0 0.8 --delta-n 0.01 \\
        --alpha 0.3 --h 500 --oracle 100000 --seed 0 --tolerance 0.01
    qrelax validate
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__, io, plate, process, spectra, state, validation
from .errors import NumericalError, QRelaxError, ValidationError

EXIT_OK, EXIT_INVALID, EXIT_TOLERANCE = 0, 1, 2

SPECTRUM_CHOICES = ("gauss", "sinc", "tri", "rect", "mono")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _require(ok, flag, constraint):
    if not ok:
        raise UsageError(f"{flag}: {constraint}")


def _finite_pos(args, name, flag, allow_inf=False):
    v = getattr(args, name)
    _require(not math.isnan(v), flag, "must be a number")
    _require(v > 0 and (allow_inf or math.isfinite(v)), flag, "must be > 0" + ("" if allow_inf else " and finite"))


def _add_output(p):
    p.add_argument("--out", default="-", help="output file, '-' for stdout (default)")
    p.add_argument("--format", choices=("csv", "json"), default=None,
                   help="output format (default: from --out suffix, else csv)")


def _add_gate_args(p):
    p.add_argument("--gate", default="sqisw", help="sqisw, identity or file:<path> (JSON real/imag grids)")
    p.add_argument("--t1", type=float, default=20.0, help="amplitude relaxation time T1 (inf allowed)")
    p.add_argument("--t2", type=float, default=15.0, help="phase relaxation time T2 (inf allowed)")
    p.add_argument("--tgate", type=float, default=1.0, help="gate execution time")
    p.add_argument("--n", type=int, default=100, help="number of Markov slices N")
    p.add_argument("--order", choices=("gate-noise", "noise-gate"), default="gate-noise",
                   help="order of gate slice and relaxation within a slice")
    _add_output(p)


def _add_plate_args(p, spectrum_choices):
    p.add_argument("--spectrum", required=True, choices=spectrum_choices)
    p.add_argument("--fwhm", type=float, default=0.02, help="spectral FWHM (um)")
    p.add_argument("--lambda0", type=float, default=0.8, help="central wavelength (um)")
    p.add_argument("--delta-n", type=float, default=0.009, help="birefringence")
    p.add_argument("--alpha", type=float, default=math.pi / 8, help="optical axis angle (rad)")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="qrelax", description="Relaxation, Choi matrices and phase-plate decoherence.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("chi", help="chi matrix of a sliced noisy gate")
    _add_gate_args(p)
    p.add_argument("--no-convergence-check", action="store_true",
                   help="skip the N vs 2N trace-distance check")

    p = sub.add_parser("negativity", help="Choi-state negativity after each slice")
    _add_gate_args(p)

    p = sub.add_parser("plate-purity", help="plate purity versus thickness")
    _add_plate_args(p, SPECTRUM_CHOICES + ("all",))
    p.add_argument("--h-min", type=float, default=1.0, help="smallest thickness (um)")
    p.add_argument("--h-max", type=float, default=3000.0, help="largest thickness (um)")
    p.add_argument("--steps", type=int, default=301, help="number of thickness points")
    _add_output(p)

    p = sub.add_parser("plate-chi", help="analytic plate chi matrix, optionally vs Monte Carlo")
    _add_plate_args(p, SPECTRUM_CHOICES)
    p.add_argument("--h", type=float, required=True, help="plate thickness (um)")
    p.add_argument("--oracle", type=int, default=None, metavar="N_SAMPLES",
                   help="also compute the Monte-Carlo chi matrix from N_SAMPLES wavelengths")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--exact-delta", action="store_true",
                   help="oracle uses the exact 1/lambda retardance instead of its linearization")
    p.add_argument("--tolerance", type=float, default=None,
                   help="exit 2 if the oracle trace distance exceeds this")
    _add_output(p)

    p = sub.add_parser("validate", help="run the invariant suite")
    p.add_argument("--out", default="-", help="report file, '-' for stdout")
    return ap


def _output_format(args):
    if args.format:
        return args.format
    return "json" if str(args.out).endswith(".json") else "csv"


def _emit(args, text):
    if args.out == "-":
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text, encoding="utf-8", newline="")


def _gate(name):
    if name == "sqisw":
        return process.sqisw()
    if name == "identity":
        return np.eye(4, dtype=complex)
    if name.startswith("file:"):
        try:
            return io.read_matrix_file(name[5:])
        except QRelaxError as exc:
            raise UsageError(f"--gate: {exc}") from None
    raise UsageError(f"--gate: must be sqisw, identity or file:<path>, got {name!r}")


def _gate_spec(args):
    _finite_pos(args, "t1", "--t1", allow_inf=True)
    _finite_pos(args, "t2", "--t2", allow_inf=True)
    _require(args.t2 <= 2 * args.t1, "--t2", "must satisfy T2 <= 2*T1 (pure dephasing time would be negative)")
    _finite_pos(args, "tgate", "--tgate")
    _require(args.n >= 1, "--n", "must be >= 1")
    gate = _gate(args.gate)
    try:
        return process.NoisyGateSpec(gate, args.tgate, args.n, args.t1, args.t2, args.order)
    except QRelaxError as exc:
        raise UsageError(f"--gate: {exc}") from None


def _gate_params(args):
    return {"gate": args.gate, "t1": args.t1, "t2": args.t2, "tgate": args.tgate, "n": args.n, "order": args.order}


def cmd_chi(args):
    spec = _gate_spec(args)
    chi = process.noisy_gate_chi(spec)
    meta = {
        "n": spec.n,
        "s": spec.s,
        "trace": float(np.trace(chi.matrix).real),
        "rank": chi.rank(),
        "eigenvalues": chi.eigenvalues(),
        "choi_purity": state.purity(chi.matrix / spec.s),
    }
    if not args.no_convergence_check:
        meta["n_check"] = 2 * spec.n
        meta["convergence_trace_distance"] = process.chi_trace_distance(
            chi, process.noisy_gate_chi(spec.with_n(2 * spec.n))
        )
    if _output_format(args) == "json":
        doc = {"command": "chi", "parameters": _gate_params(args), "metadata": meta,
               "chi": io.matrix_grids(chi.matrix)}
        _emit(args, io.json_text(doc))
    else:
        _emit(args, io.csv_text(["row", "col", "real", "imag", "abs"], io.matrix_rows(chi.matrix)))
        _write_sidecar(args, "chi", _gate_params(args), meta)
    return EXIT_OK


def _write_sidecar(args, command, params, meta):
    """CSV carries the table only; metadata goes to ``<out>.meta.json``."""
    if args.out == "-":
        return
    doc = {"command": command, "parameters": params, "metadata": meta}
    Path(str(args.out) + ".meta.json").write_text(io.json_text(doc), encoding="utf-8")


def cmd_negativity(args):
    spec = _gate_spec(args)
    series = process.negativity_dynamics(spec)
    header = ["slice_index", "time", "negativity_ideal", "negativity_noisy"]
    rows = [(p.slice_index, p.time, p.negativity_ideal, p.negativity_noisy) for p in series]
    if _output_format(args) == "json":
        doc = {"command": "negativity", "parameters": _gate_params(args),
               "columns": header, "rows": [list(r) for r in rows]}
        _emit(args, io.json_text(doc))
    else:
        _emit(args, io.csv_text(header, rows))
    return EXIT_OK


def _plate_checks(args):
    for name, flag in (("fwhm", "--fwhm"), ("lambda0", "--lambda0"), ("delta_n", "--delta-n")):
        _finite_pos(args, name, flag)
    _require(math.isfinite(args.alpha), "--alpha", "must be finite")


def cmd_plate_purity(args):
    _plate_checks(args)
    _finite_pos(args, "h_min", "--h-min")
    _finite_pos(args, "h_max", "--h-max")
    _require(args.h_max >= args.h_min, "--h-max", "must be >= --h-min")
    _require(args.steps >= 1, "--steps", "must be >= 1")
    hs = np.linspace(args.h_min, args.h_max, args.steps) if args.steps > 1 else np.array([args.h_min])
    kinds = ("gauss", "sinc", "tri", "rect") if args.spectrum == "all" else (args.spectrum,)
    header = ["spectrum", "h", "a", "b", "I_c", "I_s", "purity"]
    rows = []
    for kind in kinds:
        for pt in plate.purity_vs_thickness(kind, args.fwhm, args.alpha, args.delta_n, args.lambda0, hs):
            rows.append((kind, pt.h, pt.a, pt.b, pt.i_c, pt.i_s, pt.purity))
    params = {"spectrum": args.spectrum, "fwhm": args.fwhm, "lambda0": args.lambda0, "delta_n": args.delta_n,
              "alpha": args.alpha, "h_min": args.h_min, "h_max": args.h_max, "steps": args.steps}
    if _output_format(args) == "json":
        _emit(args, io.json_text({"command": "plate-purity", "parameters": params,
                                  "columns": header, "rows": [list(r) for r in rows]}))
    else:
        _emit(args, io.csv_text(header, rows))
    return EXIT_OK


def cmd_plate_chi(args):
    _plate_checks(args)
    _finite_pos(args, "h", "--h")
    if args.oracle is not None:
        _require(args.oracle >= 1, "--oracle", "must be >= 1")
    if args.tolerance is not None:
        _require(args.tolerance >= 0, "--tolerance", "must be >= 0")
        _require(args.oracle is not None, "--tolerance", "needs --oracle")
    p = plate.PlateParams(args.h, args.delta_n, args.alpha, args.lambda0)
    spec = spectra.SpectralDistribution(args.spectrum, args.lambda0, args.fwhm)
    a, b = plate.linearize(p)
    fc = spectra.fourier_coeffs(spec, b)
    chi = plate.analytic_chi(p, spec)
    meta = {"a": a, "b": b, "I_c": fc.i_c, "I_s": fc.i_s, "purity": plate.plate_purity(fc),
            "rank": chi.rank(), "eigenvalues": chi.eigenvalues()}
    mc = None
    status = EXIT_OK
    if args.oracle is not None:
        try:
            mc = plate.monte_carlo_chi(p, spec, args.oracle, args.seed, args.exact_delta)
        except ValidationError as exc:
            raise UsageError(f"--exact-delta: {exc}") from None
        dist = process.chi_trace_distance(mc, chi)
        meta.update({"oracle_samples": args.oracle, "seed": args.seed, "exact_delta": args.exact_delta,
                     "oracle_trace_distance": dist})
        if args.tolerance is not None:
            meta["tolerance"] = args.tolerance
            meta["within_tolerance"] = dist <= args.tolerance
            if dist > args.tolerance:
                status = EXIT_TOLERANCE
    params = {"spectrum": args.spectrum, "fwhm": args.fwhm, "lambda0": args.lambda0, "delta_n": args.delta_n,
              "alpha": args.alpha, "h": args.h}
    if _output_format(args) == "json":
        doc = {"command": "plate-chi", "parameters": params, "metadata": meta, "chi": io.matrix_grids(chi.matrix)}
        if mc is not None:
            doc["oracle_chi"] = io.matrix_grids(mc.matrix)
        _emit(args, io.json_text(doc))
    else:
        header = ["row", "col", "real", "imag", "abs"]
        rows = list(io.matrix_rows(chi.matrix))
        if mc is not None:
            header += ["mc_real", "mc_imag", "mc_abs"]
            rows = [r + m[2:] for r, m in zip(rows, io.matrix_rows(mc.matrix))]
        _emit(args, io.csv_text(header, rows))
        _write_sidecar(args, "plate-chi", params, meta)
    if status == EXIT_TOLERANCE:
        print(f"oracle trace distance {meta['oracle_trace_distance']:.3e} exceeds tolerance {args.tolerance}",
              file=sys.stderr)
    return status


def cmd_validate(args):
    results = validation.run_all()
    lines = [f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.detail}" for r in results]
    n_fail = sum(not r.passed for r in results)
    lines.append(f"{len(results) - n_fail}/{len(results)} checks passed")
    _emit(args, "\n".join(lines) + "\n")
    print(f"validate: {sum(r.seconds for r in results):.1f} s", file=sys.stderr)
    return EXIT_OK if n_fail == 0 else EXIT_TOLERANCE


COMMANDS = {
    "chi": cmd_chi,
    "negativity": cmd_negativity,
    "plate-purity": cmd_plate_purity,
    "plate-chi": cmd_plate_chi,
    "validate": cmd_validate,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except NumericalError as exc:
        print(f"numerical error: {exc} {exc.diagnostics}", file=sys.stderr)
        return EXIT_TOLERANCE
    except QRelaxError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    raise SystemExit(main())
