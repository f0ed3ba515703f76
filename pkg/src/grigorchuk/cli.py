"""Command line entry point: ``python -m grigorchuk <command> ...``.

Every command writes plain text, CSV or JSON to stdout or to ``--output``.
Files are written atomically and only after the invariants of the command
have been checked; on a failed invariant nothing is written, a one-line
diagnostic goes to stderr and the exit status is 1.

Set ``GRIG_THREADS`` to cap the worker threads used by ``ids`` and
``dichotomy``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import group, language, spectra, words
from .spectra import Params

FLOAT_FMT = "%.17g"


class InvariantError(RuntimeError):
    pass


@dataclass
class ExperimentConfig:
    command: str
    level: int | None = None
    levels: list[int] = field(default_factory=list)
    length: int | None = None
    radius: int | None = None
    tolerance: float = spectra.DEFAULT_TOL
    epsilon: float | None = None
    params: list[Params] = field(default_factory=list)
    output: str | None = None
    format: str = "csv"
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.format not in ("csv", "json"):
            raise ValueError(f"unknown format {self.format!r}")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        if self.epsilon is not None and self.epsilon <= 0:
            raise ValueError("epsilon must be positive")


def worker_count() -> int:
    raw = os.environ.get("GRIG_THREADS")
    if raw:
        try:
            n = int(raw)
        except ValueError:
            raise ValueError(f"GRIG_THREADS must be an integer, got {raw!r}") from None
        return max(1, n)
    return os.cpu_count() or 1


def _parallel_map(fn, items):
    items = list(items)
    workers = min(worker_count(), len(items)) or 1
    if workers == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))  # map keeps the input order


# -- output ----------------------------------------------------------------------

def _fmt(x) -> str:
    if isinstance(x, (float, np.floating)):
        return FLOAT_FMT % x
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    return str(x)


def csv_text(header: list[str], rows) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(header)
    for row in rows:
        wr.writerow([_fmt(x) for x in row])
    return buf.getvalue()


def json_text(obj) -> str:
    # repr of a float is the shortest string that reads back to the same value
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def write_atomic(path: str | None, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _table(cfg: ExperimentConfig, header: list[str], rows) -> str:
    rows = list(rows)
    if cfg.format == "json":
        return json_text([dict(zip(header, map(_plain, r))) for r in rows])
    return csv_text(header, rows)


def _plain(x):
    if isinstance(x, np.generic):
        return x.item()
    return x


# -- commands ----------------------------------------------------------------------

def cmd_eta(cfg):
    return words.eta_prefix(cfg.length) + "\n"


def cmd_complexity(cfg):
    counts, _ = language.enumerated_complexity(cfg.length)
    rows = []
    for L in range(1, cfg.length + 1):
        closed = language.complexity_closed_form(L)
        rows.append((L, int(counts[L]), closed, int(counts[L]) == closed))
    bad = [r[0] for r in rows if not r[3]]
    if bad:
        raise InvariantError(f"complexity mismatch at L = {bad[:5]}")
    return _table(cfg, ["L", "enumerated", "closed_form", "match"], rows)


def cmd_powers(cfg):
    rep = language.max_power_scan(cfg.length, cfg.options["window"])
    if rep.has_fourth_power:
        raise InvariantError(f"fourth power found: {rep.max_index_word!r} index {rep.max_index}")
    if cfg.format == "json":
        return json_text({
            "max_len": rep.max_len,
            "window": rep.window,
            "max_index": str(rep.max_index),
            "max_index_word": rep.max_index_word,
            "cube_root_lengths": rep.cube_root_lengths,
        })
    rows = [(p, str(idx), float(idx), rep.witness_by_length[p])
            for p, idx in rep.index_by_length.items()]
    return csv_text(["length", "index", "index_float", "witness"], rows)


def _window(cfg) -> words.PointedWord:
    seq = cfg.options.get("sequence", "eta")
    if seq == "eta":
        w = words.PointedWord(words.eta_prefix(2 * cfg.radius), cfg.radius + 1)
    else:
        w = language.special_sequence_window(seq, cfg.radius)
    return w.shift(cfg.options.get("shift", 0))


def cmd_partition(cfg):
    w = _window(cfg)
    res = language.n_partition(w, cfg.level)
    shifted = language.n_partition(w.shift(1), cfg.level)
    if shifted.residue != (res.residue + 1) % res.modulus:
        raise InvariantError("n-partition is not shift equivariant on this window")
    record = {
        "level": res.n,
        "modulus": res.modulus,
        "residue": res.residue,
        "window_length": len(w),
        "first_witness": res.witness_positions[0] if res.witness_positions else None,
        "witness_count": len(res.witness_positions),
    }
    if cfg.format == "json":
        return json_text(record)
    return csv_text(list(record), [list(record.values())])


def cmd_graph(cfg):
    if cfg.level is not None:
        g = group.schreier_graph(cfg.level)
    elif cfg.radius is not None:
        g = group.graph_from_window(_window(cfg))
    else:
        g = group.graph_from_window(words.eta_prefix(cfg.length))
    return g.to_edge_list()


def _one_params(cfg) -> Params:
    if len(cfg.params) != 1:
        raise ValueError("exactly one parameter point expected")
    return cfg.params[0]


def cmd_spectrum(cfg):
    p = _one_params(cfg)
    if cfg.options.get("window"):
        op = spectra.window_operator(cfg.level, p, cfg.options.get("sequence", "x"))
    else:
        op = spectra.level_operator(cfg.level, p)
    sd = spectra.eigenvalues(op, cfg.tolerance, params=p)
    if sd.size != len(op) or np.any(np.diff(sd.eigenvalues) < 0):
        raise InvariantError("eigenvalue count or order check failed")
    if cfg.format == "json":
        return json_text({"params": p.as_dict(), "level": cfg.level, "size": sd.size,
                          "eigenvalues": [float(x) for x in sd.eigenvalues]})
    return csv_text(["index", "eigenvalue"],
                    ((k, float(x)) for k, x in enumerate(sd.eigenvalues, start=1)))


def _summary(p: Params, n: int, tol: float) -> dict:
    row = spectra.dichotomy_table(p, [n], tol)[0]
    row["ids_sup_diff"] = spectra.ids_comparison(n, p, tol)
    return row


def cmd_ids(cfg):
    jobs = [(p, n) for p in cfg.params for n in cfg.levels]
    rows = _parallel_map(lambda job: _summary(job[0], job[1], cfg.tolerance), jobs)
    curves = cfg.options.get("curves")
    if curves:
        out = []
        for p, n in jobs:
            a = spectra.level_spectrum(n, p, cfg.tolerance)
            b = spectra.eigenvalues(spectra.window_operator(n, p), cfg.tolerance)
            for E in np.union1d(a.eigenvalues, b.eigenvalues):
                out.append((p.t, p.u, p.v, p.w, n, float(E),
                            float(spectra.ids_distribution(a, E)),
                            float(spectra.ids_distribution(b, E))))
        write_atomic(curves, csv_text(["t", "u", "v", "w", "level", "E", "N_level", "N_window"], out))
    bad = [(r["params"], r["level"]) for r in rows if r["ids_sup_diff"] > 6 / 2 ** r["level"]]
    text = _records(cfg, rows)
    if bad:
        raise InvariantError(f"IDS bound 6/2^n exceeded at {bad[0]}")
    return text


def cmd_dichotomy(cfg):
    jobs = [(p, n) for p in cfg.params for n in cfg.levels]
    rows = _parallel_map(lambda job: spectra.dichotomy_table(job[0], [job[1]], cfg.tolerance)[0], jobs)
    if cfg.epsilon is not None:
        for row, (p, n) in zip(rows, jobs):
            sd = spectra.level_spectrum(n, p, cfg.tolerance)
            row["epsilon"] = cfg.epsilon
            row["cover_length"] = spectra.measure_estimate(sd, cfg.epsilon).cover_length
    return _records(cfg, rows)


_RECORD_FIELDS = ["t", "u", "v", "w", "level", "size", "min", "max",
                  "gap_count", "cover_length", "epsilon"]


def _records(cfg, rows: list[dict]) -> str:
    if cfg.format == "json":
        return json_text(rows)
    header = list(_RECORD_FIELDS)
    if rows and "ids_sup_diff" in rows[0]:
        header.append("ids_sup_diff")
    flat = []
    for r in rows:
        vals = {**r["params"], **{k: v for k, v in r.items() if k != "params"}}
        flat.append([vals[k] for k in header])
    return csv_text(header, flat)


def cmd_relators(cfg):
    k_max = cfg.options.get("k_max", 3)
    checks = [(g + g, g + g) for g in group.GENERATORS]
    checks += [("bc=d", "bcd"), ("cb=d", "cbd")]
    for i, w in enumerate(group.lysenok_relators(k_max)):
        family = "(ad)^4" if i <= k_max else "(adacac)^4"
        checks.append((f"kappa^{i % (k_max + 1)}{family}", w))
    rows = []
    for n in range(1, cfg.level + 1):
        for name, w in checks:
            rows.append((n, name, len(w), group.acts_trivially(w, n)))
        rows.append((n, "transitive", 0, group.is_transitive(n)))
    text = _table(cfg, ["level", "relation", "word_length", "holds"], rows)
    failed = [r for r in rows if not r[3]]
    if failed:
        raise InvariantError(f"relation {failed[0][1]} fails on level {failed[0][0]}")
    return text


COMMANDS = {
    "eta": cmd_eta,
    "complexity": cmd_complexity,
    "powers": cmd_powers,
    "partition": cmd_partition,
    "graph": cmd_graph,
    "spectrum": cmd_spectrum,
    "ids": cmd_ids,
    "dichotomy": cmd_dichotomy,
    "relators": cmd_relators,
}


def run(cfg: ExperimentConfig) -> int:
    try:
        text = COMMANDS[cfg.command](cfg)
        write_atomic(cfg.output, text)
    except InvariantError as exc:
        print(f"invariant failed: {exc}", file=sys.stderr)
        return 1
    except (ValueError, words.SizeGuardError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


# -- argument parsing ------------------------------------------------------------------

def parse_levels(text: str) -> list[int]:
    """``"6-12"`` or ``"6,8,10"``."""
    out = []
    for part in text.split(","):
        if "-" in part:
            lo, hi = part.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    if not out:
        raise argparse.ArgumentTypeError("empty level list")
    return out


def parse_params(text: str) -> Params:
    try:
        vals = [float(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad parameter point {text!r}") from None
    if len(vals) != 4:
        raise argparse.ArgumentTypeError("a parameter point is t,u,v,w")
    return Params(*vals)


def _add_output(sp, default_format="csv"):
    sp.add_argument("-o", "--output", help="output file (default: stdout)")
    sp.add_argument("--format", choices=("csv", "json"), default=default_format)


def _add_params(sp):
    for name in "tuvw":
        sp.add_argument(f"--{name}", type=float, default=1.0, help=f"weight {name} (default 1)")


def _add_window(sp):
    sp.add_argument("--radius", type=int, help="window radius around the origin")
    sp.add_argument("--sequence", choices=("eta", "x", "y", "z"), default="eta",
                    help="eta, or the two-sided sequence with the given letter at 0")
    sp.add_argument("--shift", type=int, default=0, help="apply the shift this many times")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="grigorchuk", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("eta", help="prefix of the fixed point")
    sp.add_argument("--length", type=int, required=True)
    sp.add_argument("-o", "--output")

    sp = sub.add_parser("complexity", help="enumerated vs closed-form complexity")
    sp.add_argument("--max", dest="length", type=int, default=64)
    _add_output(sp)

    sp = sub.add_parser("powers", help="largest power index per root length")
    sp.add_argument("--max-len", dest="length", type=int, default=256)
    sp.add_argument("--window", type=int, default=2**20)
    _add_output(sp)

    sp = sub.add_parser("partition", help="n-partition of a window")
    sp.add_argument("--level", type=int, required=True)
    _add_window(sp)
    _add_output(sp, "json")

    sp = sub.add_parser("graph", help="edge list of a Schreier graph or window graph")
    grp = sp.add_mutually_exclusive_group(required=True)
    grp.add_argument("--level", type=int)
    grp.add_argument("--length", type=int, help="graph of eta_1 .. eta_length")
    grp.add_argument("--radius", type=int)
    sp.add_argument("--sequence", choices=("eta", "x", "y", "z"), default="eta")
    sp.add_argument("--shift", type=int, default=0)
    sp.add_argument("-o", "--output")

    sp = sub.add_parser("spectrum", help="eigenvalues of M_n or of the window operator")
    sp.add_argument("--level", type=int, required=True)
    sp.add_argument("--window", action="store_true", help="use the window operator instead of M_n")
    sp.add_argument("--sequence", choices=("x", "y", "z"), default="x")
    sp.add_argument("--tol", type=float, default=spectra.DEFAULT_TOL)
    _add_params(sp)
    _add_output(sp)

    for name, helptext in (("ids", "IDS sup distance between M_n and window operators"),
                           ("dichotomy", "cover lengths of level spectra")):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("--levels", type=parse_levels, default=parse_levels("6-12"))
        sp.add_argument("--params", type=parse_params, nargs="+",
                        default=[Params(1, 1, 1, 1), Params(1, 1, 2, 3)],
                        help="parameter points t,u,v,w")
        sp.add_argument("--tol", type=float, default=spectra.DEFAULT_TOL)
        if name == "ids":
            sp.add_argument("--curves", help="also write both counting functions to this CSV")
        else:
            sp.add_argument("--epsilon", type=float, help="fixed epsilon instead of 2^-n")
        _add_output(sp, "json")

    sp = sub.add_parser("relators", help="relations and transitivity on levels 1..n")
    sp.add_argument("--level", type=int, default=10)
    sp.add_argument("--k-max", type=int, default=3)
    _add_output(sp)
    return ap


def config_from_args(ns: argparse.Namespace) -> ExperimentConfig:
    options = {}
    for key in ("window", "sequence", "shift", "curves", "k_max"):
        if hasattr(ns, key):
            options[key] = getattr(ns, key)
    if ns.command in ("ids", "dichotomy"):
        params = ns.params
    elif ns.command == "spectrum":
        params = [Params(ns.t, ns.u, ns.v, ns.w)]
    else:
        params = []
    return ExperimentConfig(
        command=ns.command,
        level=getattr(ns, "level", None),
        levels=getattr(ns, "levels", []),
        length=getattr(ns, "length", None),
        radius=getattr(ns, "radius", None),
        tolerance=getattr(ns, "tol", spectra.DEFAULT_TOL),
        epsilon=getattr(ns, "epsilon", None),
        params=params,
        output=ns.output,
        format=getattr(ns, "format", "csv"),
        options=options,
    )


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    if ns.command == "partition" and ns.radius is None:
        ns.radius = 3 * 2 ** ns.level
    try:
        cfg = config_from_args(ns)
    except ValueError as exc:
        parser.error(str(exc))
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
