"""Command-line front end.

Every subcommand resolves its parameters as flags > ``--config`` JSON file >
defaults, and writes a ``.meta.json`` sidecar next to each output file that
records the resolved configuration, where each value came from, and the
package version.  Exit codes: 0 success, 1 numeric or verification
failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

from . import __version__
from .algebra import IntPolynomial, poly_compose
from .dynamics import (
    DEFAULT_SYSTEM_WORDS,
    PolynomialSystem,
    RootFindingError,
    backward_orbit,
    escape_raster,
    iterate,
    periodic_points,
    preimages,
    roots,
)
from .riley import (
    LANDMARKS,
    batch_audit,
    landmark,
    nielsen_witness,
    nonfree_certificate,
    root_location_audit,
    sl_screen,
    supergroup_witness,
)
from .table1 import check_table1
from .words import enumerate_words, exponent_word, exponents_of, parse_word, star, word_polynomial

THREADS_ENV = "RILEYSLICE_THREADS"


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# value converters (flag strings or JSON values from a config file)
# ---------------------------------------------------------------------------


def _json_or_raw(v):
    if isinstance(v, str):
        try:
            return json.loads(v)
        except json.JSONDecodeError:
            raise ConfigError(f"could not parse {v!r} as JSON") from None
    return v


def to_seq(v) -> tuple[int, ...]:
    v = _json_or_raw(v)
    if not isinstance(v, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in v):
        raise ConfigError(f"expected a JSON array of non-zero integers, got {v!r}")
    try:
        return exponent_word(v)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def to_seqs(v) -> tuple[tuple[int, ...], ...]:
    v = _json_or_raw(v)
    if not isinstance(v, list) or not v:
        raise ConfigError(f"expected a non-empty JSON array of exponent arrays, got {v!r}")
    return tuple(to_seq(x) for x in v)


def to_complex(v) -> complex:
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return complex(v)
    if isinstance(v, list) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    if isinstance(v, str):
        text = v.strip()
        try:
            return landmark(text).z
        except KeyError:
            pass
        try:
            if "," in text:
                re_, im_ = text.split(",")
                return complex(float(re_), float(im_))
            return complex(text.replace(" ", "").replace("i", "j"))
        except ValueError:
            pass
    raise ConfigError(f"could not parse {v!r} as a complex number")


def to_int(v) -> int:
    try:
        if isinstance(v, bool) or (isinstance(v, float) and not v.is_integer()):
            raise ValueError
        return int(v)
    except (TypeError, ValueError):
        raise ConfigError(f"expected an integer, got {v!r}") from None


def positive_int(v) -> int:
    n = to_int(v)
    if n < 1:
        raise ConfigError(f"expected a positive integer, got {v!r}")
    return n


def nonneg_int(v) -> int:
    n = to_int(v)
    if n < 0:
        raise ConfigError(f"expected a non-negative integer, got {v!r}")
    return n


def to_float(v) -> float:
    try:
        if isinstance(v, bool):
            raise ValueError
        return float(v)
    except (TypeError, ValueError):
        raise ConfigError(f"expected a number, got {v!r}") from None


def optional(conv):
    def inner(v):
        return None if v is None else conv(v)

    return inner


def to_window(v) -> tuple[float, float, float, float]:
    if isinstance(v, str):
        v = v.split(",")
    if not isinstance(v, (list, tuple)) or len(v) != 4:
        raise ConfigError(f"window must be re_min,re_max,im_min,im_max, got {v!r}")
    w = tuple(to_float(x) for x in v)
    if not (w[1] > w[0] and w[3] > w[2]):
        raise ConfigError(f"window {w} has zero area")
    return w


def to_bool(v) -> bool:
    if isinstance(v, bool):
        return v
    if isinstance(v, str) and v.lower() in ("true", "false", "1", "0"):
        return v.lower() in ("true", "1")
    raise ConfigError(f"expected a boolean, got {v!r}")


def to_str(v) -> str:
    if not isinstance(v, str):
        raise ConfigError(f"expected a string, got {v!r}")
    return v


# ---------------------------------------------------------------------------
# subcommand schemas
# ---------------------------------------------------------------------------

# key -> (default, converter, flag help)
Schema = dict[str, tuple[Any, Callable, str]]

COMMON: Schema = {
    "out": (None, optional(to_str), "output path prefix"),
    "threads": (None, optional(positive_int), f"worker threads (default ${THREADS_ENV} or 1)"),
}

SCHEMAS: dict[str, Schema] = {
    "table1": {},
    "poly": {
        "seq": (None, optional(to_seq), "exponent sequence, e.g. [1,1]"),
        "word": (None, optional(to_str), "word text, e.g. 'b a1 b a-1 b'"),
    },
    "star": {
        "s": (None, to_seq, "left exponent sequence"),
        "t": (None, to_seq, "right exponent sequence"),
    },
    "compose": {
        "p": (None, to_seq, "outer word (exponent sequence)"),
        "q": (None, to_seq, "inner word (exponent sequence)"),
    },
    "roots": {
        "seq": (None, optional(to_seq), "exponent sequence"),
        "coeffs": (None, optional(lambda v: [to_int(c) for c in _json_or_raw(v)]), "integer coefficients, lowest first"),
    },
    "preimages": {
        "seq": ([1, 1], to_seq, "exponent sequence"),
        "target": ("figure-eight", to_complex, "target point (complex or landmark name)"),
    },
    "cycles": {
        "seq": ([1, 1], to_seq, "exponent sequence"),
        "n": (2, positive_int, "period"),
        "exact": (False, to_bool, "only cycles of exact period n"),
    },
    "orbit": {
        "seq": ([1, 1], to_seq, "exponent sequence"),
        "z0": ("1j", to_complex, "starting point"),
        "n": (10, nonneg_int, "number of iterations"),
    },
    "julia": {
        "poly": ([1, 1], to_seq, "exponent sequence of the polynomial"),
        "res": (512, positive_int, "resolution (width = height)"),
        "window": ("-1,3,-2,2", to_window, "re_min,re_max,im_min,im_max"),
        "max_iter": (256, positive_int, "iteration cap"),
        "bailout": (None, optional(to_float), "escape radius (default 1 + sum |coeffs|)"),
    },
    "cloud": {
        "gens": (None, optional(to_seqs), "generator words, e.g. [[1],[1,1]]"),
        "poly": (None, optional(to_seq), "single generator word (alternative to --gens)"),
        "target": ("figure-eight", to_complex, "start of the backward orbit"),
        "samples": (10000, positive_int, "number of distinct points"),
        "seed": (0, nonneg_int, "random seed"),
        "burn_in": (20, nonneg_int, "discarded initial steps"),
        "chains": (1, positive_int, "independent chains"),
    },
    "witness": {
        "z0": (2, to_complex, "target parameter (non-zero)"),
        "lam": ("1.5+0.5j", to_complex, "point to approach"),
        "max_len": (3, positive_int, "maximum word length"),
        "max_exp": (2, positive_int, "maximum |exponent|"),
        "limit": (None, optional(positive_int), "maximum number of candidate words"),
    },
    "nielsen": {
        "seq": ([1, 1], to_seq, "exponent sequence"),
        "N": (1, positive_int, "number of Nielsen classes sought (cycles of period 2N)"),
    },
    "nonfree": {
        "z": (2, to_complex, "parameter to certify"),
        "max_len": (3, positive_int, "maximum word length"),
        "max_exp": (3, positive_int, "maximum |exponent|"),
        "limit": (None, optional(positive_int), "maximum number of candidate words"),
    },
    "screen": {
        "z": (0.5, to_complex, "parameter to screen"),
        "steps": (5, positive_int, "length of the squaring chain"),
    },
    "audit": {
        "seq": (None, optional(to_seq), "audit a single word instead of an enumeration"),
        "max_len": (4, positive_int, "maximum word length"),
        "max_exp": (3, positive_int, "maximum |exponent|"),
        "limit": (500, positive_int, "number of enumerated words"),
    },
    "landmarks": {},
}


@dataclass
class RunConfig:
    command: str
    params: dict
    sources: dict = field(default_factory=dict)

    def __getitem__(self, key):
        return self.params[key]

    def to_json(self) -> dict:
        return {"command": self.command, "params": _jsonable(self.params), "sources": self.sources}


def _jsonable(v):
    if isinstance(v, complex):
        return [v.real, v.imag]
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def validate_config(command: str, flags: dict, file_cfg: dict | None = None) -> RunConfig:
    """Merge flags > file > defaults, converting and validating every value."""
    if command not in SCHEMAS:
        raise ConfigError(f"unknown command {command!r}")
    schema = {**COMMON, **SCHEMAS[command]}
    file_cfg = file_cfg or {}
    unknown = sorted(set(file_cfg) - set(schema))
    if unknown:
        raise ConfigError(f"unknown config keys for {command}: {', '.join(unknown)}")
    unknown = sorted(set(flags) - set(schema))
    if unknown:
        raise ConfigError(f"unknown options for {command}: {', '.join(unknown)}")
    params, sources = {}, {}
    for key, (default, conv, _) in schema.items():
        if key in flags:
            raw, src = flags[key], "flag"
        elif key in file_cfg:
            raw, src = file_cfg[key], "file"
        else:
            raw, src = default, "default"
        try:
            params[key] = conv(raw)
        except ConfigError as exc:
            raise ConfigError(f"--{key.replace('_', '-')}: {exc}") from None
        sources[key] = src
    if params.get("threads") is None:
        env = os.environ.get(THREADS_ENV)
        params["threads"] = positive_int(env) if env else 1
        sources["threads"] = "env" if env else "default"
    if command == "poly" and (params["seq"] is None) == (params["word"] is None):
        raise ConfigError("poly needs exactly one of --seq or --word")
    if command == "roots" and (params["seq"] is None) == (params["coeffs"] is None):
        raise ConfigError("roots needs exactly one of --seq or --coeffs")
    if command == "cloud" and params["gens"] is not None and params["poly"] is not None:
        raise ConfigError("cloud takes --gens or --poly, not both")
    if command in ("witness",) and params["z0"] == 0:
        raise ConfigError("--z0 must be non-zero")
    if command in ("nonfree", "screen") and params["z"] == 0:
        raise ConfigError("--z must be non-zero")
    return RunConfig(command, params, sources)


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------


def _dumps(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n"


def _write(path: Path, data: bytes | str, cfg: RunConfig, extra: dict | None = None):
    path.parent.mkdir(parents=True, exist_ok=True)
    if isinstance(data, str):
        data = data.encode()
    path.write_bytes(data)
    meta = {"artifact": "rileyslice", "version": __version__, "config": cfg.to_json(), "output": path.name}
    if extra:
        meta.update(extra)
    Path(str(path) + ".meta.json").write_text(_dumps(meta))


def _emit(obj, cfg: RunConfig, stdout):
    text = _dumps(obj)
    if cfg["out"]:
        _write(Path(cfg["out"] + ".json"), text, cfg)
    stdout.write(text)


def _poly_of(cfg) -> tuple[tuple[int, ...], IntPolynomial]:
    s = cfg["seq"]
    return s, word_polynomial(s)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_table1(cfg, out):
    rows = check_table1()
    ok = sum(r["match"] for r in rows)
    _emit({"rows": rows, "matched": ok, "total": len(rows)}, cfg, out)
    return 0 if ok == len(rows) else 1


def cmd_poly(cfg, out):
    s = cfg["seq"] if cfg["seq"] is not None else exponents_of(parse_word(cfg["word"]))
    p = word_polynomial(s)
    _emit({"seq": list(s), **p.to_json(), "text": str(p)}, cfg, out)
    return 0


def cmd_star(cfg, out):
    u = star(cfg["s"], cfg["t"])
    p = word_polynomial(u)
    _emit({"seq": list(u), **p.to_json(), "text": str(p)}, cfg, out)
    return 0


def cmd_compose(cfg, out):
    p, q = word_polynomial(cfg["p"]), word_polynomial(cfg["q"])
    c = poly_compose(p, q)
    u = star(cfg["p"], cfg["q"])
    match = word_polynomial(u) == c
    _emit({"seq": list(u), **c.to_json(), "text": str(c), "star_matches": match}, cfg, out)
    return 0 if match else 1


def cmd_roots(cfg, out):
    if cfg["seq"] is not None:
        p = word_polynomial(cfg["seq"])
    else:
        p = IntPolynomial(tuple(cfg["coeffs"]))
    rts = roots(p)
    _emit({"polynomial": p.to_json(), "roots": rts}, cfg, out)
    return 0


def cmd_preimages(cfg, out):
    s, p = _poly_of(cfg)
    pts = preimages(p, cfg["target"])
    _emit({"seq": list(s), "target": cfg["target"], "preimages": pts}, cfg, out)
    return 0


def cmd_cycles(cfg, out):
    s, p = _poly_of(cfg)
    cycles = periodic_points(p, cfg["n"], exact=cfg["exact"])
    _emit([c.to_json() for c in cycles], cfg, out)
    return 0


def cmd_orbit(cfg, out):
    s, p = _poly_of(cfg)
    o = iterate(p, cfg["z0"], cfg["n"])
    _emit(
        {
            "points": o.points,
            "escaped": o.escaped,
            "eventually_periodic": o.eventually_periodic,
            "preperiod": o.preperiod,
            "period": o.period,
        },
        cfg,
        out,
    )
    return 0


def cmd_julia(cfg, out):
    p = word_polynomial(cfg["poly"])
    res = cfg["res"]
    r = escape_raster(p, cfg["window"], res, res, cfg["max_iter"], cfg["bailout"], threads=cfg["threads"])
    prefix = cfg["out"] or "julia"
    path = Path(prefix + ".pgm")
    extra = {
        "window": list(r.window),
        "width": r.width,
        "height": r.height,
        "max_iter": r.max_iter,
        "bailout": r.bailout,
        "polynomial": p.to_json(),
        "encoding": "escape count clamped to 255; 0 = never escaped; row 0 at im_max",
    }
    _write(path, r.to_pgm(), cfg, extra)
    out.write(_dumps({"pgm": str(path), "escaping_pixels": int(r.escaping().sum())}))
    return 0


def cmd_cloud(cfg, out):
    if cfg["gens"] is not None:
        words = cfg["gens"]
    elif cfg["poly"] is not None:
        words = (cfg["poly"],)
    else:
        words = DEFAULT_SYSTEM_WORDS
    system = PolynomialSystem.from_words(words)
    cloud = backward_orbit(
        system,
        cfg["target"],
        cfg["samples"],
        seed=cfg["seed"],
        burn_in=cfg["burn_in"],
        chains=cfg["chains"],
        threads=cfg["threads"],
    )
    prefix = cfg["out"] or "cloud"
    path = Path(prefix + ".csv")
    _write(path, cloud.to_csv(), cfg, {"generators": [list(s) for s in words], "failures": cloud.failures})
    out.write(_dumps({"csv": str(path), "points": len(cloud.points), "failures": cloud.failures}))
    return 0


def cmd_witness(cfg, out):
    r = supergroup_witness(cfg["z0"], cfg["lam"], cfg["max_len"], cfg["max_exp"], cfg["limit"], threads=cfg["threads"])
    _emit(r.to_json(), cfg, out)
    return 0 if r.accepted else 1


def cmd_nielsen(cfg, out):
    r = nielsen_witness(cfg["seq"], cfg["N"])
    _emit(r.to_json(), cfg, out)
    valid = all(c.cycle_error <= 1e-9 for c in r.cycles) and all(e <= 1e-9 for _, e in r.matrix_check)
    return 0 if valid else 1


def cmd_nonfree(cfg, out):
    c = nonfree_certificate(cfg["z"], cfg["max_len"], cfg["max_exp"], cfg["limit"])
    _emit({"z": cfg["z"], "certificate": c.to_json() if c else None}, cfg, out)
    return 0


def cmd_screen(cfg, out):
    r = sl_screen(cfg["z"], cfg["steps"])
    _emit({"z": r.z, "status": r.status, "chain": [{"word": list(w), "value": v} for w, v in r.chain]}, cfg, out)
    return 0


def cmd_audit(cfg, out):
    if cfg["seq"] is not None:
        r = root_location_audit(word_polynomial(cfg["seq"]), cfg["seq"])
        _emit({"word": list(cfg["seq"]), "passed": r.passed, "roots": r.roots, "moduli": r.moduli}, cfg, out)
        return 0 if r.passed else 1
    b = batch_audit(enumerate_words(cfg["max_len"], cfg["max_exp"], cfg["limit"]))
    _emit(
        {
            "words": b.words,
            "passed": b.passed,
            "root_failures": [list(s) for s in b.root_failures],
            "value_failures": [{"word": list(s), "z": z, "value": v} for s, z, v in b.value_failures],
            "min_modulus": b.min_modulus,
        },
        cfg,
        out,
    )
    return 0 if b.passed else 1


def cmd_landmarks(cfg, out):
    _emit([lm.to_json() for lm in LANDMARKS], cfg, out)
    return 0


COMMANDS = {
    "table1": cmd_table1,
    "poly": cmd_poly,
    "star": cmd_star,
    "compose": cmd_compose,
    "roots": cmd_roots,
    "preimages": cmd_preimages,
    "cycles": cmd_cycles,
    "orbit": cmd_orbit,
    "julia": cmd_julia,
    "cloud": cmd_cloud,
    "witness": cmd_witness,
    "nielsen": cmd_nielsen,
    "nonfree": cmd_nonfree,
    "screen": cmd_screen,
    "audit": cmd_audit,
    "landmarks": cmd_landmarks,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rileyslice", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name, argument_default=argparse.SUPPRESS)
        sp.add_argument("--config", help="JSON file of option values")
        for key, (default, _, help_) in {**COMMON, **SCHEMAS[name]}.items():
            flag = "--" + key.replace("_", "-")
            shown = "" if default is None else f" (default: {default})"
            sp.add_argument(flag, dest=key, help=help_ + shown)
    return parser


def main(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    flags = vars(ns).copy()
    command = flags.pop("command")
    config_path = flags.pop("config", None)
    try:
        file_cfg = {}
        if config_path:
            try:
                file_cfg = json.loads(Path(config_path).read_text())
            except (OSError, json.JSONDecodeError) as exc:
                raise ConfigError(f"could not read config file {config_path}: {exc}") from None
            if not isinstance(file_cfg, dict):
                raise ConfigError("config file must hold a JSON object")
        cfg = validate_config(command, flags, file_cfg)
    except ConfigError as exc:
        parser.print_usage(sys.stderr)
        print(f"rileyslice {command}: error: {exc}", file=sys.stderr)
        return 2
    try:
        return COMMANDS[command](cfg, stdout)
    except (ValueError, RootFindingError, OverflowError) as exc:
        print(f"rileyslice {command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
