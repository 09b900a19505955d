"""Command line front end.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 resource cap.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .amplitude import (OUT_OF_SCOPE, DescendentTable, extract_descendents, in_scope, open_signatures,
                        strata, total_amplitude)
from .cache import Cache, default_cache_dir
from .closed import ClosedTable, extract_closed
from .enumeration import (DEFAULT_MAX_ENTRIES, DEFAULT_MAX_NODES, GraphCatalog, enumerate_closed_trivalent,
                          enumerate_open_trivalent)
from .errors import (InvalidGraphError, NonLaurentError, OpenCombError, OutOfScopeError, ResourceLimitError,
                     VerificationError)
from .kasteleyn import class_signs
from .nodal import NodalCatalog, enumerate_nodal

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3
SUITES = ("string", "dilaton", "kdv", "catalan", "angular")
CLOSED_ROWS = ((0, 3), (1, 1), (1, 2), (1, 3), (1, 4))


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    signature: tuple[int, ...] = ()
    cache_dir: Path | None = None
    fmt: str = "text"
    max_entries: int = DEFAULT_MAX_ENTRIES
    max_nodes: int = DEFAULT_MAX_NODES
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.max_entries <= 0 or self.max_nodes <= 0:
            raise UsageError("resource caps must be positive")

    def key(self, *extra) -> str:
        return json.dumps([self.command, list(self.signature), self.fmt, self.max_entries,
                           self.max_nodes, *extra], sort_keys=True)


# ---------------------------------------------------------------------------
# computations (each returns the exact text written to stdout)
# ---------------------------------------------------------------------------

def _catalog_text(cfg: RunConfig) -> str:
    m = cfg.options.get("m")
    if cfg.options.get("closed"):
        g, n = cfg.signature
        return enumerate_closed_trivalent(g, n, cfg.max_entries, cfg.max_nodes).to_jsonl()
    g, k, l = cfg.signature
    if m is not None:
        return enumerate_nodal(g, k, l, m, cfg.max_entries).to_jsonl()
    return enumerate_open_trivalent(g, k, l, cfg.max_entries, cfg.max_nodes).to_jsonl()


def _amplitude_text(cfg: RunConfig) -> str:
    g, k, l = cfg.signature
    out = [total_amplitude(g, k, l).to_text()]
    if cfg.options.get("strata"):
        for st in strata(g, k, l):
            out.append(f"m={st.m} graphs={st.count} sum={st.value().to_text()}")
    return "\n".join(out) + "\n"


def _table_text(table: DescendentTable, fmt: str) -> str:
    if fmt == "csv":
        return table.to_csv()
    if fmt == "json":
        return table.to_json()
    return table.to_text()


def _descendent_table(cache: Cache, g: int, k: int, l: int, route: str = "both") -> DescendentTable:
    text = cache.get_or_compute("descendents", json.dumps([g, k, l, route]),
                                lambda: extract_descendents(g, k, l, route).to_json())
    return DescendentTable.from_json(text)


def _open_table(cache: Cache, max_dim: int) -> DescendentTable:
    t = DescendentTable()
    for sig in open_signatures(max_dim):
        t.update(_descendent_table(cache, *sig))
    return t


def _closed_table(cache: Cache) -> ClosedTable:
    t = ClosedTable()
    for g, n in CLOSED_ROWS:
        text = cache.get_or_compute("closed", json.dumps([g, n]), lambda: extract_closed(g, n).to_json())
        t.update(ClosedTable.from_json(text))
    return t


def _kasteleyn_text(cfg: RunConfig) -> tuple[str, bool]:
    g, k, l = cfg.signature
    lines = []
    ok = True
    for e in enumerate_open_trivalent(g, k, l, cfg.max_entries, cfg.max_nodes):
        rec = class_signs(e.graph).record()
        ok &= rec["match"]
        lines.append(json.dumps(rec, sort_keys=True, separators=(",", ":")))
    return "".join(x + "\n" for x in lines), ok


def _verify_text(cfg: RunConfig, cache: Cache) -> tuple[str, bool]:
    from .verify import angular_identity, catalan_identities, open_kdv_check, string_dilaton_check

    reports = []
    suites = cfg.options["suites"]
    max_dim = cfg.options["max_dim"]
    table = None
    if {"string", "dilaton", "kdv"} & set(suites):
        table = _open_table(cache, max_dim)
        sigs = set(open_signatures(max_dim))
    for s in suites:
        if s in ("string", "dilaton"):
            reports.append(string_dilaton_check(table, sigs, suite=s))
        elif s == "kdv":
            closed = _closed_table(cache)
            for n in (1, 2):
                reports.append(open_kdv_check(n, cfg.options["degree"], table, closed, open_signatures=sigs))
        elif s == "catalan":
            reports.append(catalan_identities(cfg.options["m_max"]))
        elif s == "angular":
            reports.append(angular_identity(cfg.options["n_max"]))
    records = [r for rep in reports for r in rep.to_dicts()]
    notes = [n for rep in reports for n in rep.notes]
    passed = all(rep.passed for rep in reports)
    text = json.dumps({"passed": passed, "suites": list(suites), "notes": notes, "records": records},
                      sort_keys=True, indent=1) + "\n"
    return text, passed


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _nonneg(x: str) -> int:
    v = int(x)
    if v < 0:
        raise argparse.ArgumentTypeError("expected a nonnegative integer")
    return v


def _positive(x: str) -> int:
    v = int(x)
    if v <= 0:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False, allow_abbrev=False)
    common.add_argument("--cache-dir", type=Path, default=None,
                        help="cache directory (default: $OPENCOMB_CACHE_DIR or ~/.cache/opencomb)")
    common.add_argument("--no-cache", action="store_true", help="disable the on-disk cache")
    common.add_argument("--max-entries", type=_positive, default=DEFAULT_MAX_ENTRIES,
                        help="cap on catalog entries")
    common.add_argument("--max-nodes", type=_positive, default=DEFAULT_MAX_NODES,
                        help="cap on search tree nodes")
    p = _Parser(prog="opencomb", description="Combinatorial open descendents from ribbon graphs.",
                allow_abbrev=False)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def add(parent, name, **kw):
        return parent.add_parser(name, parents=[common], allow_abbrev=False, **kw)

    def sig(sp, n=3, optional=False):
        names = ("g", "k", "l")[:n]
        for name in names:
            sp.add_argument(name, type=_nonneg, nargs="?" if optional else None)

    e = add(sub, "enumerate", help="emit a graph catalog as JSON lines")
    sig(e, optional=True)
    e.add_argument("--m", type=_nonneg, default=None, help="number of nodes (nodal catalog)")
    e.add_argument("--closed", type=_nonneg, nargs=2, metavar=("G", "N"), default=None,
                   help="closed trivalent graphs of genus G with N faces")

    a = add(sub, "amplitude", help="reduced total amplitude")
    sig(a)
    a.add_argument("--strata", action="store_true", help="also print per-m sums")

    d = add(sub, "descendents", help="open descendent table")
    sig(d)
    d.add_argument("--format", choices=("text", "csv", "json"), default="text")
    d.add_argument("--route", choices=("symbolic", "linear", "both"), default="both")

    k = add(sub, "kasteleyn", help="signed Kasteleyn class reports as JSON lines")
    sig(k)

    v = add(sub, "verify", help="run identity suites")
    v.add_argument("--suite", action="append", choices=SUITES, default=None)
    v.add_argument("--max-dim", type=_nonneg, default=6)
    v.add_argument("--degree", type=_positive, default=4)
    v.add_argument("--m-max", type=_positive, default=10)
    v.add_argument("--n-max", type=int, choices=(1, 2, 3), default=3)

    c = sub.add_parser("catalog", help="export or import catalogs", allow_abbrev=False)
    csub = c.add_subparsers(dest="action", parser_class=_Parser)
    ex = add(csub, "export")
    sig(ex, optional=True)
    ex.add_argument("--m", type=_nonneg, default=None)
    ex.add_argument("--closed", type=_nonneg, nargs=2, metavar=("G", "N"), default=None)
    ex.add_argument("-o", "--output", type=Path, required=True)
    im = add(csub, "import")
    im.add_argument("path", type=Path)
    return p


def _catalog_config(args, command: str) -> RunConfig:
    if args.closed is not None:
        if args.g is not None or args.m is not None:
            raise UsageError("--closed takes the signature itself; drop g k l and --m")
        return RunConfig(command, tuple(args.closed), options={"closed": True},
                         max_entries=args.max_entries, max_nodes=args.max_nodes)
    if args.l is None:
        raise UsageError("expected g k l or --closed G N")
    return RunConfig(command, (args.g, args.k, args.l), options={"m": args.m},
                     max_entries=args.max_entries, max_nodes=args.max_nodes)


def _run(args, out) -> int:
    cmd = args.command
    if cmd is None or (cmd == "catalog" and args.action is None):
        raise UsageError("missing command")
    cache = Cache(None if args.no_cache else (args.cache_dir or default_cache_dir()))
    if cmd == "enumerate":
        cfg = _catalog_config(args, cmd)
        out.write(cache.get_or_compute("catalog", cfg.key(cfg.options), lambda: _catalog_text(cfg)))
        return EXIT_OK
    if cmd == "catalog":
        if args.action == "export":
            cfg = _catalog_config(args, "enumerate")
            text = cache.get_or_compute("catalog", cfg.key(cfg.options), lambda: _catalog_text(cfg))
            tmp = args.output.with_name(args.output.name + ".tmp")
            tmp.write_text(text, encoding="utf-8")
            tmp.replace(args.output)
            return EXIT_OK
        if args.action == "import":
            text = args.path.read_text(encoding="utf-8")
            head = json.loads(text.splitlines()[0])["signature"]
            cat = NodalCatalog.from_jsonl(text) if "m" in head else GraphCatalog.from_jsonl(text)
            again = cat.to_jsonl()
            if again != text:
                out.write(again)
                print("catalog did not round-trip byte for byte", file=sys.stderr)
                return EXIT_FAIL
            out.write(again)
            return EXIT_OK
        raise UsageError("catalog needs export or import")
    if cmd == "amplitude":
        cfg = RunConfig(cmd, (args.g, args.k, args.l), options={"strata": args.strata})
        if not in_scope(*cfg.signature):
            raise OutOfScopeError(f"(g,k,l)={cfg.signature}: {OUT_OF_SCOPE}")
        out.write(cache.get_or_compute("amplitude", cfg.key(args.strata), lambda: _amplitude_text(cfg)))
        return EXIT_OK
    if cmd == "descendents":
        cfg = RunConfig(cmd, (args.g, args.k, args.l), fmt=args.format)
        if not in_scope(*cfg.signature):
            raise OutOfScopeError(f"(g,k,l)={cfg.signature}: {OUT_OF_SCOPE}")
        table = _descendent_table(cache, *cfg.signature, route=args.route)
        out.write(_table_text(table, cfg.fmt))
        return EXIT_OK
    if cmd == "kasteleyn":
        cfg = RunConfig(cmd, (args.g, args.k, args.l), max_entries=args.max_entries, max_nodes=args.max_nodes)
        text, ok = _kasteleyn_text(cfg)
        out.write(text)
        return EXIT_OK if ok else EXIT_FAIL
    if cmd == "verify":
        suites = tuple(dict.fromkeys(args.suite)) if args.suite else SUITES
        cfg = RunConfig(cmd, fmt="json", options={"suites": suites, "max_dim": args.max_dim,
                                                  "degree": args.degree, "m_max": args.m_max,
                                                  "n_max": args.n_max})
        text, ok = _verify_text(cfg, cache)
        out.write(text)
        return EXIT_OK if ok else EXIT_FAIL
    raise UsageError(f"unknown command {cmd}")


def main(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    logging.basicConfig(level=logging.ERROR, format="%(levelname)s: %(message)s")
    try:
        args = build_parser().parse_args(argv)
        return _run(args, out)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OutOfScopeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimitError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (VerificationError, NonLaurentError) as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (InvalidGraphError, ValueError, json.JSONDecodeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OpenCombError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
