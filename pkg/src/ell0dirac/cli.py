"""Command-line driver.

Exit codes: 0 when every check passes, 1 when a verification fails, 2 for
usage or configuration errors. Settings come from flags, then an optional
flat ``key=value`` config file, then built-in defaults.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from dataclasses import asdict, dataclass

import numpy as np

from .clifford import (
    StructureError,
    build_paper_gammas,
    build_weyl_brauer,
    extract_blocks,
    verify_clifford,
)
from .linalg import hermitian_eig
from .pauli import (
    build_operator_set,
    splitting_operator,
    verify_bracket_tensor,
    verify_identity_suite,
    verify_spin_algebra,
)
from .sterngerlach import (
    DegenerateModelError,
    FieldModel,
    force_spectrum,
    force_z,
    simulate_beam,
    verify_theta_reduction,
)
from .symbols import (
    PhysicalParams,
    WaveVector,
    dirac_symbol_spectrum,
    dispersion_csv,
    dispersion_omega,
    dispersion_sweep,
    verify_bopp_factorization,
    verify_factorization,
    verify_wave_reduction,
)
from .verification import Check, Report

SCHEMA_VERSION = 1
EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2

DEFAULTS = {
    "unit_system": None,
    "c": 1.0, "hbar": 1.0, "m": 0.0, "q": 1.0, "g": 2.0, "ell0": 1.0, "kappa0": 1.0,
    "B0": 1.0, "beta1": 1.0, "beta3": 1.0, "dt": 1.0,
    "seed": 0, "samples": 100, "format": "json", "out": None,
    "kmin": 0.0, "kmax": 10.0, "steps": 100, "target": None, "k": None, "omega": None,
    "points": 20,
}
FLOAT_KEYS = ("c", "hbar", "m", "q", "g", "ell0", "kappa0", "B0", "beta1", "beta3", "dt",
              "kmin", "kmax", "omega")
INT_KEYS = ("seed", "samples", "steps", "points")
TARGETS = ("dirac_symbol", "splitting", "force_z")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    params: PhysicalParams
    field: FieldModel
    dt: float
    seed: int
    samples: int
    output_format: str
    output_path: str | None
    extra: dict

    def summary(self):
        d = asdict(self.params)
        d.update(asdict(self.field))
        d.update(dt=self.dt, seed=self.seed, samples=self.samples)
        return d


def read_config_file(path):
    """Parse flat ``key=value`` lines; ``#`` starts a comment."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc.strerror}") from None
    out = {}
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{n}: expected key=value, got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in DEFAULTS:
            raise ConfigError(f"{path}:{n}: unknown key {key!r}")
        out[key] = value
    return out


def _coerce(key, value):
    if value is None:
        return None
    try:
        if key in FLOAT_KEYS:
            v = float(value)
            if not math.isfinite(v):
                raise ConfigError(f"{key} must be finite")
            return v
        if key in INT_KEYS:
            return int(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{key}: cannot parse {value!r}") from None
    return value


def _parse_k(text):
    if text is None:
        return (0.0, 0.0, 0.0)
    parts = [s for s in str(text).split(",") if s.strip()]
    try:
        vals = [float(s) for s in parts]
    except ValueError:
        raise ConfigError(f"k: cannot parse {text!r}") from None
    if len(vals) == 1:
        vals += [0.0, 0.0]
    if len(vals) != 3 or not all(math.isfinite(v) for v in vals):
        raise ConfigError("k needs one magnitude or three finite components")
    return tuple(vals)


def resolve_config(args) -> RunConfig:
    merged = dict(DEFAULTS)
    if args.config:
        merged.update(read_config_file(args.config))
    for key in DEFAULTS:
        v = getattr(args, key, None)
        if v is not None:
            merged[key] = v
    vals = {k: _coerce(k, v) for k, v in merged.items()}

    unit = vals["unit_system"]
    if unit is None:
        unit = "natural" if vals["c"] == 1.0 and vals["hbar"] == 1.0 else "si-like"
    try:
        params = PhysicalParams(vals["c"], vals["hbar"], vals["m"], vals["q"], vals["g"],
                                vals["ell0"], vals["kappa0"], unit)
        fld = FieldModel(vals["B0"], vals["beta1"], vals["beta3"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if not vals["dt"] > 0:
        raise ConfigError(f"dt must be positive, got {vals['dt']}")
    if vals["samples"] < 1:
        raise ConfigError(f"samples must be >= 1, got {vals['samples']}")
    if vals["points"] < 1:
        raise ConfigError(f"points must be >= 1, got {vals['points']}")
    if vals["format"] not in ("json", "csv"):
        raise ConfigError(f"format must be json or csv, got {vals['format']!r}")
    extra = {k: vals[k] for k in ("kmin", "kmax", "steps", "target", "omega", "points")}
    extra["k"] = _parse_k(vals["k"])
    return RunConfig(params, fld, vals["dt"], vals["seed"], vals["samples"],
                     vals["format"], vals["out"], extra)


def _emit(cfg: RunConfig, text: str):
    if cfg.output_path:
        with open(cfg.output_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _header(cfg, command):
    return {"schema_version": SCHEMA_VERSION, "command": command, "config": cfg.summary()}


def _reports_csv(reports) -> str:
    buf = io.StringIO()
    buf.write("suite,identity_id,anchor,max_abs_deviation,pass,skipped\n")
    for rep in reports:
        for c in rep.checks:
            cells = [rep.name, c.identity_id, c.anchor, f"{c.max_abs_deviation:.17g}",
                     str(bool(c.passed)).lower(), str(bool(c.skipped)).lower()]
            buf.write(",".join(_csv_cell(s) for s in cells) + "\n")
    return buf.getvalue()


def _csv_cell(s):
    if any(ch in s for ch in ',"\n'):
        return '"' + s.replace('"', '""') + '"'
    return s


def _emit_reports(cfg, command, reports):
    ok = all(r.passed for r in reports)
    if cfg.output_format == "csv":
        _emit(cfg, _reports_csv(reports))
    else:
        payload = _header(cfg, command)
        payload["pass"] = ok
        payload["suites"] = [r.to_dict() for r in reports]
        _emit(cfg, _json(payload))
    for r in reports:
        ok_n, total = r.counts()
        print(f"{r.name}: {ok_n}/{total} {'pass' if r.passed else 'FAIL'}", file=sys.stderr)
    return EXIT_OK if ok else EXIT_FAIL


def _block_report(basis):
    try:
        extract_blocks(basis)
        return Report("block-structure", [Check("blocks", "Gamma0 = diag(I,-I), G5 = I", 0.0, True)])
    except StructureError as exc:
        return Report("block-structure", [Check("blocks", "Gamma0 = diag(I,-I), G5 = I",
                                                math.inf, False, note=str(exc))])


def cmd_verify(cfg: RunConfig):
    p = cfg.params
    basis = build_paper_gammas()
    reports = [verify_clifford(basis), _block_report(basis)]
    reports.append(verify_factorization(p, cfg.samples, cfg.seed, basis))
    ops = build_operator_set(extract_blocks(basis), p.hbar)
    reports.append(verify_identity_suite(ops))
    reports.append(verify_spin_algebra(ops))
    reports.append(verify_wave_reduction(p, cfg.samples, cfg.seed))
    reports.append(verify_bracket_tensor(ops.brackets))
    rng = np.random.default_rng(cfg.seed)
    points = [tuple(x) for x in rng.uniform(-2.0, 2.0, size=(cfg.extra["points"], 3))]
    reports.append(verify_theta_reduction(p, ops, cfg.field, points))
    return _emit_reports(cfg, "verify", reports)


def cmd_dispersion(cfg: RunConfig):
    e = cfg.extra
    try:
        rows = dispersion_sweep(cfg.params, e["kmin"], e["kmax"], e["steps"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if cfg.output_format == "csv":
        _emit(cfg, dispersion_csv(rows))
    else:
        payload = _header(cfg, "dispersion")
        payload["rows"] = [{"k": k, "omega": w, "omega_classical": wc} for k, w, wc in rows]
        _emit(cfg, _json(payload))
    return EXIT_OK


def _spectrum_payload(cfg, target, report, extra):
    payload = _header(cfg, "spectrum")
    payload["target"] = target
    payload.update(extra)
    payload["spectrum"] = report.to_dict()
    return payload


def cmd_spectrum(cfg: RunConfig):
    p, e = cfg.params, cfg.extra
    target = e["target"]
    if target not in TARGETS:
        raise ConfigError(f"--target must be one of {', '.join(TARGETS)}")
    k = e["k"]
    kmag = math.sqrt(sum(x * x for x in k))
    extra = {"k": list(k)}
    if target == "dirac_symbol":
        omega = e["omega"] if e["omega"] is not None else dispersion_omega(p, kmag)
        extra["omega"] = omega
        try:
            report = dirac_symbol_spectrum(p, WaveVector(k, omega), build_paper_gammas())
        except ValueError as exc:
            raise ConfigError(f"dirac_symbol: {exc}") from None
    else:
        ops = build_operator_set(extract_blocks(build_paper_gammas()), p.hbar)
        if target == "splitting":
            report = hermitian_eig(splitting_operator(ops, kmag, p.ell0))
            extra["k2_ell0_2"] = kmag * kmag * p.ell0 * p.ell0
        else:
            try:
                report = force_spectrum(p, ops, cfg.field)
            except ValueError as exc:
                raise ConfigError(f"force_z: {exc}") from None
    payload = _spectrum_payload(cfg, target, report, extra)
    if cfg.output_format == "csv":
        buf = io.StringIO()
        buf.write("value,multiplicity\n")
        for v, m in report.clusters:
            buf.write(f"{v:.17g},{m}\n")
        _emit(cfg, buf.getvalue())
    else:
        _emit(cfg, _json(payload))
    return EXIT_OK


def cmd_bopp(cfg: RunConfig):
    basis = build_weyl_brauer(7)
    reports = [verify_clifford(basis)]
    rep = verify_bopp_factorization(cfg.params, cfg.samples, cfg.seed, basis)
    dim_ok = basis.dim == 128
    rep.checks.insert(0, Check("dim", "2^(14/2) = 128", float(abs(basis.dim - 128)), dim_ok))
    reports.append(rep)
    return _emit_reports(cfg, "bopp", reports)


def cmd_stern_gerlach(cfg: RunConfig):
    p, f = cfg.params, cfg.field
    if p.m <= 0:
        raise ConfigError("stern-gerlach needs m > 0 for the magnetic moment g q / (2 m)")
    if f.beta1 == 0:
        raise ConfigError("stern-gerlach needs beta1 != 0")
    ops = build_operator_set(extract_blocks(build_paper_gammas()), p.hbar)
    try:
        spec = force_spectrum(p, ops, f)
        beam = simulate_beam(p, ops, f, "unpolarized", cfg.dt, cfg.samples, cfg.seed)
    except DegenerateModelError as exc:
        raise ConfigError(str(exc)) from None
    if cfg.output_format == "csv":
        _emit(cfg, beam.to_csv())
    else:
        head = _header(cfg, "stern-gerlach")
        head["force_spectrum"] = spec.to_dict()
        _emit(cfg, beam.to_json(head))
    return EXIT_OK


COMMANDS = {
    "verify": cmd_verify,
    "dispersion": cmd_dispersion,
    "spectrum": cmd_spectrum,
    "bopp": cmd_bopp,
    "stern-gerlach": cmd_stern_gerlach,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    for name in ("c", "hbar", "m", "q", "g", "ell0", "kappa0", "B0", "beta1", "beta3", "dt"):
        common.add_argument(f"--{name}", type=float)
    common.add_argument("--unit-system", dest="unit_system", choices=("natural", "si-like"))
    common.add_argument("--seed", type=int)
    common.add_argument("--samples", type=int)
    common.add_argument("--points", type=int, help="field points for the IIIc check")
    common.add_argument("--format", choices=("json", "csv"))
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--config", help="flat key=value config file")
    common.add_argument("--kmin", type=float)
    common.add_argument("--kmax", type=float)
    common.add_argument("--steps", type=int)
    common.add_argument("--target", choices=TARGETS)
    common.add_argument("--k", help="wave number magnitude or kx,ky,kz")
    common.add_argument("--omega", type=float, help="frequency for dirac_symbol (default: on shell)")

    parser = argparse.ArgumentParser(prog="ell0dirac", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    try:
        cfg = resolve_config(args)
        return COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"ell0dirac: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"ell0dirac: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
