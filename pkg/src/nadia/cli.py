"""Command-line tool: check, import, export, translate, stats, default, serve.

The database directory comes from --db or the NADIA_DB environment
variable; --dls names the schema source.  Exit codes: 0 success, 1
operational failure (or failed check), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Optional

from . import wire
from .dls import DlsSyntaxError, parse_dls, resolve_schema
from .dls.ast import DefaultDecl, RuleDecl
from .dls.schema import SchemaError
from .interchange import (
    FormatError, ImportRejected, canonical_bytes, export_db, import_db,
)
from .lexbase.model import (
    CorruptStore, SchemaMismatch, Strength, TransactionRejected, UnknownLemma,
)
from .lexbase.store import Database, UnknownLanguage, open_database
from .rules import RuleError, compile_default, compile_rule


class CliError(Exception):
    pass


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nadia",
        description="Acception-based multilingual lexical database manager.")
    parser.add_argument("--db", default=os.environ.get("NADIA_DB"),
                        help="database directory (default: $NADIA_DB)")
    parser.add_argument("--dls", required=False,
                        help="schema source file (.dls)")
    parser.add_argument("--json", action="store_true",
                        help="machine-readable output")
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="run all checks and rules")
    check.add_argument("--fail-on", choices=["warning", "delay", "critical"],
                       default="delay")

    imp = sub.add_parser("import", help="import a bundle document")
    imp.add_argument("file")
    imp.add_argument("--mode", choices=["strict", "raw"], default="strict")

    exp = sub.add_parser("export", help="write the canonical export")
    exp.add_argument("-o", "--output", default=None)
    exp.add_argument("--include-delayed", action="store_true")

    tr = sub.add_parser("translate", help="translate a lemma")
    tr.add_argument("--from", dest="source", required=True)
    tr.add_argument("--to", dest="target", required=True)
    tr.add_argument("lemma")

    sub.add_parser("stats", help="entry/acception/axie counts")

    dflt = sub.add_parser("default", help="apply defaulting rules")
    dflt.add_argument("--batch", action="store_true", required=True)
    dflt.add_argument("--class", dest="class_name", default=None)

    srv = sub.add_parser("serve", help="run the HTTP service")
    srv.add_argument("--bind", default="127.0.0.1")
    srv.add_argument("--port", type=int, default=8040)
    srv.add_argument("--static", default=None,
                     help="directory with the workbench build")

    return parser


def _load_db(args, need_location: bool = True) -> Database:
    if not args.dls:
        raise CliError("--dls is required")
    try:
        decls = parse_dls(Path(args.dls).read_text(encoding="utf-8"), args.dls)
        schema = resolve_schema(decls)
        rules = [compile_rule(d, schema) for d in decls if isinstance(d, RuleDecl)]
        defaults = [compile_default(d, schema)
                    for d in decls if isinstance(d, DefaultDecl)]
    except OSError as exc:
        raise CliError(f"cannot read {args.dls}: {exc}") from exc
    except (DlsSyntaxError, SchemaError, RuleError) as exc:
        raise CliError(str(exc)) from exc
    location = args.db
    if need_location and not location:
        raise CliError("no database: pass --db or set NADIA_DB")
    try:
        return open_database(location, schema, rules=rules, defaults=defaults)
    except (CorruptStore, SchemaMismatch) as exc:
        raise CliError(str(exc)) from exc


def _cmd_check(args) -> int:
    db = _load_db(args)
    violations = sorted(db.check_all(), key=lambda v: v.sort_key())
    if args.json:
        print(json.dumps([wire.violation_to_json(v) for v in violations],
                         ensure_ascii=False, indent=2, sort_keys=True))
    else:
        for v in violations:
            print(f"{v.strength.label}: {v.code}: {v.message}")
        print(f"{len(violations)} violations")
    threshold = Strength.parse(args.fail_on)
    return 1 if any(v.strength >= threshold for v in violations) else 0


def _cmd_import(args) -> int:
    if not args.db:
        raise CliError("no database: pass --db or set NADIA_DB")
    db = _load_db(args, need_location=False)
    try:
        data = Path(args.file).read_bytes()
    except OSError as exc:
        raise CliError(f"cannot read {args.file}: {exc}") from exc
    try:
        imported = import_db(data, db.schema, mode=args.mode, rules=db.rules)
    except FormatError as exc:
        raise CliError(str(exc)) from exc
    except ImportRejected as exc:
        for v in exc.violations:
            print(f"critical: {v.code}: {v.message}", file=sys.stderr)
        raise CliError("import rejected") from exc
    imported.defaults = db.defaults
    imported.save_as(args.db)
    counts = imported.stats()
    print(f"imported {counts['axieCount']} axies into {args.db}")
    return 0


def _cmd_export(args) -> int:
    db = _load_db(args)
    data = canonical_bytes(export_db(db, include_delayed=args.include_delayed))
    if args.output:
        Path(args.output).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
    return 0


def _cmd_translate(args) -> int:
    db = _load_db(args)
    try:
        result = db.translate(args.lemma, args.source, args.target)
    except (UnknownLemma, UnknownLanguage) as exc:
        raise CliError(str(exc)) from exc
    if args.json:
        print(json.dumps(wire.translation_to_json(result), ensure_ascii=False,
                         indent=2, sort_keys=True))
        return 0
    for acc in result.acceptions:
        if acc.untranslatable:
            print(f"{acc.display_name}: (untranslatable)")
        for hit in acc.hits:
            where = "/".join(hit.path) if hit.path else hit.kind
            print(f"{acc.display_name}: [{where}] {hit.lemma}")
    return 0


def _cmd_stats(args) -> int:
    db = _load_db(args)
    counts = db.stats()
    if args.json:
        print(json.dumps(counts, ensure_ascii=False, indent=2, sort_keys=True))
        return 0
    for lang, c in counts["perDictionary"].items():
        print(f"{lang}: {c['entries']} entries, {c['acceptions']} acceptions")
    print(f"axies: {counts['axieCount']} ({counts['subAcceptionCount']} sub-acceptions)")
    return 0


def _cmd_default(args) -> int:
    db = _load_db(args)
    try:
        changed = db.apply_defaults_batch(class_name=args.class_name)
    except TransactionRejected as exc:
        raise CliError(str(exc)) from exc
    print(json.dumps({"defaulted": changed}) if args.json
          else f"defaulted {changed} articles")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import build_app

    db = _load_db(args)
    app = build_app(db, static_dir=args.static)
    uvicorn.run(app, host=args.bind, port=args.port, log_level="warning")
    return 0


_COMMANDS = {
    "check": _cmd_check,
    "import": _cmd_import,
    "export": _cmd_export,
    "translate": _cmd_translate,
    "stats": _cmd_stats,
    "default": _cmd_default,
    "serve": _cmd_serve,
}


def main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except CliError as exc:
        print(f"nadia: error: {exc}", file=sys.stderr)
        return 1


def entrypoint():
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
