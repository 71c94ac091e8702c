"""Command-line front end.

Every subcommand reads its parameters from flags, from an optional
``key = value`` config file (flags win), and writes CSV or JSON to stdout or
``--output``.  Exit status: 0 success, 2 invalid input, 3 a numerical guard
refused to answer.
"""

import argparse
import io
import json
import math
from pathlib import Path
import subprocess
import sys

from . import ball3d, degennes, energy, fixtures, geometry, halfcylinder, lupan
from .errors import NumericalGuardError, ValidationError

SIG_DIGITS = 12


# ------------------------------------------------------------ value parsing


def _floats(text):
    if isinstance(text, (list, tuple)):
        return [float(x) for x in text]
    return [float(x) for x in str(text).split(",") if x.strip()]


def _vector3(text):
    v = _floats(text)
    if len(v) != 3:
        raise ValidationError(f"expected three comma-separated numbers, got {text!r}")
    return v


def _int(text):
    return int(text)


def _float(text):
    return float(text)


def _str(text):
    return str(text).strip()


# option name -> (parser, default); a default of None means required
OPTIONS = {
    "degennes-curve": {"xi_min": (_float, -1.0), "xi_max": (_float, 8.0), "num": (_int, 91),
                       "j": (_int, 1), "delta": (_float, degennes.DEFAULT_DELTA)},
    "theta0": {"delta": (_float, degennes.DEFAULT_DELTA)},
    "lupan": {"theta_deg": (_floats, None), "window": (_float, lupan.WINDOW_MAX)},
    "energy": {"theta_deg": (_floats, None), "lambda": (_floats, None)},
    "halfcyl": {"theta_deg": (_float, None), "lambda": (_float, None), "L": (_floats, None),
                "T": (_float, 10.0), "ds": (_float, 0.05)},
    "predict": {"surface": (_str, "sphere"), "radius": (_float, 1.0), "axes": (_vector3, None),
                "field": (_vector3, None), "Lambda": (_float, None), "resolution": (_int, 2048)},
    "verify-ball": {"h": (_floats, [0.08, 0.05, 0.03]), "Lambda": (_float, 0.8), "B": (_float, 1.0),
                    "n_rho": (_int, 128), "n_phi": (_int, 256)},
    "fixtures": {"action": (_str, None), "data_dir": (_str, str(fixtures.DATA_DIR)),
                 "skip_table": (_int, 0), "skip_pinned": (_int, 0)},
}

DEFAULT_FORMAT = {"theta0": "json", "predict": "json", "fixtures": "json"}


def read_config(path):
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (x.strip() for x in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def build_parser():
    parser = argparse.ArgumentParser(prog="surfspec", description=__doc__.splitlines()[0],
                                     allow_abbrev=False)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS, help="key = value parameter file")
    common.add_argument("--format", choices=["csv", "json"], default=argparse.SUPPRESS)
    common.add_argument("--output", default=argparse.SUPPRESS, help="write here instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "degennes-curve": "sample mu_j(xi) of the de Gennes family",
        "theta0": "the de Gennes constant and its minimizer",
        "lupan": "eigenvalues of the half-plane model below a window",
        "energy": "the densities E(theta, lambda) and n(theta, lambda)",
        "halfcyl": "half-cylinder per-area energies for increasing L",
        "predict": "boundary-integral predictions for a sphere or ellipsoid",
        "verify-ball": "direct ball eigensolve against the predictions",
        "fixtures": "regenerate the pinned reference data",
    }
    for name, opts in OPTIONS.items():
        p = sub.add_parser(name, parents=[common], help=helps[name], allow_abbrev=False)
        for key in opts:
            if key == "action":
                p.add_argument("action", choices=["regenerate"])
                continue
            flag = "--" + key.replace("_", "-")
            p.add_argument(flag, dest=key, default=argparse.SUPPRESS)
    return parser


def resolve(args):
    """Merge defaults, config file and flags (in rising priority) into one dict."""
    ns = vars(args)
    command = ns["command"]
    raw = {}
    if "config" in ns:
        raw.update(read_config(ns["config"]))
    meta = {k: raw.pop(k) for k in ("format", "output") if k in raw}
    meta.update({k: ns[k] for k in ("format", "output") if k in ns})
    raw.update({k: v for k, v in ns.items() if k not in ("command", "config", "format", "output")})
    cfg = {}
    for key, (conv, default) in OPTIONS[command].items():
        if key in raw:
            try:
                cfg[key] = conv(raw[key])
            except ValueError as exc:
                raise ValidationError(f"bad value for {key}: {raw[key]!r}") from exc
        elif default is None and not (command == "predict" and key == "axes"):
            raise ValidationError(f"missing required parameter {key}")
        else:
            cfg[key] = default
    unknown = set(raw) - set(OPTIONS[command])
    if unknown:
        raise ValidationError(f"unknown parameter(s): {', '.join(sorted(unknown))}")
    fmt = meta.get("format") or DEFAULT_FORMAT.get(command, "csv")
    if fmt not in ("csv", "json"):
        raise ValidationError(f"unknown format {fmt!r}")
    return command, cfg, fmt, meta.get("output")


# ------------------------------------------------------------ subcommands


def _cmd_degennes_curve(cfg):
    if cfg["num"] < 2 or cfg["xi_max"] <= cfg["xi_min"]:
        raise ValidationError("need num >= 2 and xi_max > xi_min")
    step = (cfg["xi_max"] - cfg["xi_min"]) / (cfg["num"] - 1)
    xis = [cfg["xi_min"] + i * step for i in range(cfg["num"])]
    cols = ["xi"] + [f"mu{j}" for j in range(1, cfg["j"] + 1)]
    rows = [[x] + [degennes.mu(x, j, cfg["delta"]) for j in range(1, cfg["j"] + 1)] for x in xis]
    return cols, rows, {"grid": {"delta": cfg["delta"], "margin": degennes.DEFAULT_MARGIN}}


def _cmd_theta0(cfg):
    t, x = degennes.minimize_mu1(cfg["delta"])
    return ["theta0", "xi0"], [[t, x]], {"grid": {"delta": cfg["delta"], "richardson": True}}


def _cmd_lupan(cfg):
    rows = []
    boxes = {}
    for deg in cfg["theta_deg"]:
        spec = lupan.zetas(math.radians(deg), cfg["window"])
        boxes[repr(deg)] = _box_dict(spec.box)
        rows.extend([deg, j + 1, z] for j, z in enumerate(spec.zetas))
    return ["theta_deg", "j", "zeta"], rows, {"grid": boxes}


def _box_dict(box):
    return {"s_min": box.s_min, "s_max": box.s_max, "t_max": box.t_max, "ds": box.ds,
            "scheme": box.scheme, "sem_elements": box.sem_elements, "sem_order": box.sem_order}


def _cmd_energy(cfg):
    rows = []
    for deg in cfg["theta_deg"]:
        for lam in cfg["lambda"]:
            th = math.radians(deg)
            rows.append([deg, lam, energy.energy_density(th, lam).value,
                         energy.count_density(th, lam).value])
    return ["theta_deg", "lambda", "E", "n"], rows, {"grid": {"theta_min_deg": 3.0}}


def _cmd_halfcyl(cfg):
    study = halfcylinder.convergence_study(math.radians(cfg["theta_deg"]), cfg["lambda"], cfg["L"],
                                           T=cfg["T"], ds=cfg["ds"])
    rows = [[cfg["theta_deg"], cfg["lambda"], r.L, r.energy_per_area, r.gap] for r in study.rows]
    return (["theta_deg", "lambda", "L", "energy_per_area", "gap"], rows,
            {"grid": {"T": cfg["T"], "ds": cfg["ds"], "scheme": "sem"}})


def _cmd_predict(cfg):
    if cfg["surface"] == "sphere":
        params = (cfg["radius"],)
    elif cfg["axes"] is None:
        raise ValidationError("ellipsoid needs --axes a,b,c")
    else:
        params = tuple(cfg["axes"])
    mesh = geometry.make_surface(cfg["surface"], params, cfg["resolution"])
    e = geometry.predict_energy(mesh, cfg["field"], cfg["Lambda"])
    n = geometry.predict_count(mesh, cfg["field"], cfg["Lambda"])
    return ["energy", "count"], [[e, n]], {"grid": {"resolution": list(mesh.resolution)}}


def _cmd_verify_ball(cfg):
    grid = ball3d.MeridianGrid(cfg["n_rho"], cfg["n_phi"])
    table = ball3d.asymptotic_table(cfg["h"], cfg["Lambda"], cfg["B"], grid)
    rows = [[r.h, r.count, r.deficit, r.pred_count / r.h, r.pred_energy, r.ratio_count, r.ratio_energy]
            for r in table]
    cols = ["h", "count", "deficit", "pred_count", "pred_energy", "ratio_count", "ratio_energy"]
    return cols, rows, {"grid": {"n_rho": grid.n_rho, "n_phi": grid.n_phi}}


def _cmd_fixtures(cfg):
    report = lambda msg: print(msg, file=sys.stderr)
    written = fixtures.regenerate(cfg["data_dir"], table=not cfg["skip_table"],
                                  pinned=not cfg["skip_pinned"], progress=report)
    return ["path"], [[str(p)] for p in written], {"grid": {}}


COMMANDS = {
    "degennes-curve": _cmd_degennes_curve,
    "theta0": _cmd_theta0,
    "lupan": _cmd_lupan,
    "energy": _cmd_energy,
    "halfcyl": _cmd_halfcyl,
    "predict": _cmd_predict,
    "verify-ball": _cmd_verify_ball,
    "fixtures": _cmd_fixtures,
}


# ------------------------------------------------------------ output


def fmt_value(v):
    if isinstance(v, bool) or isinstance(v, int):
        return str(int(v))
    if isinstance(v, float):
        if math.isinf(v) or math.isnan(v):
            return str(v)
        return f"{v:.{SIG_DIGITS}g}"
    return str(v)


def to_csv(cols, rows):
    buf = io.StringIO()
    buf.write(",".join(cols) + "\n")
    for row in rows:
        buf.write(",".join(fmt_value(v) for v in row) + "\n")
    return buf.getvalue()


def git_describe():
    try:
        out = subprocess.run(["git", "describe", "--always", "--dirty", "--tags"],
                             cwd=Path(__file__).parent, capture_output=True, text=True, timeout=10)
    except (OSError, subprocess.SubprocessError):
        return "unknown"
    return out.stdout.strip() or "unknown"


def _plain(v):
    if hasattr(v, "item"):
        return v.item()
    return v


def to_json(command, cfg, cols, rows, extra):
    outputs = [{c: _plain(v) for c, v in zip(cols, row)} for row in rows]
    record = {
        "command": command,
        "inputs": cfg,
        "outputs": outputs[0] if len(outputs) == 1 else outputs,
        "provenance": {"git_describe": git_describe(), "grid": extra["grid"]},
    }
    return json.dumps(record, indent=1, sort_keys=True) + "\n"


def run(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        command, cfg, fmt, output = resolve(args)
        cols, rows, extra = COMMANDS[command](cfg)
    except ValidationError as exc:
        print(f"surfspec: error: {exc}", file=sys.stderr)
        return 2
    except NumericalGuardError as exc:
        print(f"surfspec: numerical guard: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    text = to_csv(cols, rows) if fmt == "csv" else to_json(command, cfg, cols, rows, extra)
    if output:
        Path(output).write_text(text, newline="\n")
    else:
        sys.stdout.write(text)
    return 0


def main():
    sys.exit(run())
