"""Command-line front end.

Exit codes: 0 success, 1 domain error (invalid taxonomy, single-class
training data, ...), 2 I/O, parse, or configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from . import lexicon as lx
from . import pipeline
from . import synth
from . import taxonomy as tx
from .config import load_config
from .errors import ConfigError, MindkbError, ParseError
from .stemmer import get_stemmer

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_IO = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mindkb",
        description="Knowledge-base driven weak supervision for depression "
                    "signal screening in text corpora.")
    parser.add_argument("--version", action="version",
                        version=f"mindkb {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    kb = sub.add_parser("kb", help="taxonomy utilities")
    kb_sub = kb.add_subparsers(dest="kb_command", required=True)
    kb_validate = kb_sub.add_parser("validate",
                                    help="validate a taxonomy document")
    kb_validate.add_argument("--taxonomy", default="bundled",
                             help="taxonomy JSON path (default: bundled)")
    kb_show = kb_sub.add_parser("show", help="print the taxonomy tree")
    kb_show.add_argument("--taxonomy", default="bundled")

    lex = sub.add_parser("lexicon", help="lexicon utilities")
    lex_sub = lex.add_subparsers(dest="lexicon_command", required=True)
    lex_build = lex_sub.add_parser(
        "build", help="merge lexicon categories into instance bindings")
    lex_build.add_argument("--config", default=None,
                           help="pipeline config TOML")
    lex_build.add_argument("--set", dest="overrides", action="append",
                           default=[], metavar="KEY=VALUE")
    lex_build.add_argument("--out", default=None,
                           help="write the merged bindings JSON here")

    run = sub.add_parser("run", help="run pipeline stages")
    run.add_argument("--config", default=None, help="pipeline config TOML")
    run.add_argument("--stages", default=None,
                     help="comma-separated subset of: "
                          + ",".join(pipeline.STAGES))
    run.add_argument("--set", dest="overrides", action="append", default=[],
                     metavar="KEY=VALUE")

    syn = sub.add_parser("synth", help="generate a synthetic corpus")
    syn.add_argument("--out", required=True, help="corpus output directory")
    syn.add_argument("--users", type=int, default=100)
    syn.add_argument("--minority-fraction", type=float, default=0.1)
    syn.add_argument("--signal-strength", type=float, default=0.3)
    syn.add_argument("--posts", type=int, default=20)
    syn.add_argument("--vocab", type=int, default=400)
    syn.add_argument("--seed", type=int, default=0)

    rep = sub.add_parser("report", help="print a run's evaluation report")
    rep.add_argument("--run-dir", required=True,
                     help="pipeline output directory")
    rep.add_argument("--json", action="store_true",
                     help="emit the JSON report instead of text")
    return parser


def _resolve_taxonomy_path(value: str) -> Path:
    if value == "bundled":
        from .resources import TAXONOMY_FIXTURE, bundled_path
        return bundled_path(TAXONOMY_FIXTURE)
    return Path(value)


def cmd_kb_validate(args) -> int:
    path = _resolve_taxonomy_path(args.taxonomy)
    if not path.is_file():
        raise ParseError(f"taxonomy file not found: {path}")
    try:
        taxonomy = tx.load_taxonomy(path)
    except tx.ValidationError as exc:
        for violation in exc.violations:
            print(violation)
        return EXIT_DOMAIN
    violations = tx.validate(taxonomy)
    for violation in violations:
        print(violation)
    if violations:
        return EXIT_DOMAIN
    print(f"{path.name}: valid ({len(taxonomy.nodes)} nodes, "
          f"{len(taxonomy.edges)} edges)")
    return EXIT_OK


def cmd_kb_show(args) -> int:
    path = _resolve_taxonomy_path(args.taxonomy)
    if not path.is_file():
        raise ParseError(f"taxonomy file not found: {path}")
    taxonomy = tx.load_taxonomy(path)
    root = taxonomy.roots()[0]

    def walk(node_id: str, depth: int) -> None:
        node = taxonomy.node(node_id)
        crosses = []
        for _, edge in tx.query_related(taxonomy, node_id, "cross"):
            other = edge.target if edge.source == node_id else edge.source
            arrow = "->" if edge.source == node_id else "<-"
            crosses.append(f"{edge.cross_type} {arrow} {other}")
        suffix = f"   [{'; '.join(crosses)}]" if crosses else ""
        print(f"{'  ' * depth}{node.label} ({node.kind.value}, L{node.level})"
              f"{suffix}")
        for child in taxonomy.children(node_id):
            walk(child, depth + 1)

    walk(root.id, 0)
    return EXIT_OK


def cmd_lexicon_build(args) -> int:
    config = load_config(args.config, args.overrides)
    stemmer = get_stemmer(config.stemmer)
    taxonomy = tx.load_taxonomy(config.taxonomy_path())
    lexicons = {
        source: lx.load_lexicon(path, source)
        for source, path in config.lexicon_paths()
    }
    bindings = lx.load_bindings_config(
        config.bindings_path(), lexicons, taxonomy, stemmer)
    payload = []
    for name in bindings.feature_order:
        if name == bindings.phrase_instance:
            phrases = lx.load_phrase_list(config.phrase_list_path())
            payload.append({
                "instance": name,
                "kind": "phrase_count",
                "phrases": len(phrases.phrases),
            })
            print(f"{name}: phrase count over {len(phrases.phrases)} phrases")
            continue
        binding = bindings.binding(name)
        payload.append({
            "instance": name,
            "sources": [list(s) for s in binding.sources],
            "merged_stems": sorted(binding.merged_stems),
        })
        print(f"{name}: {len(binding.merged_stems)} stems from "
              f"{len(binding.sources)} categor"
              f"{'y' if len(binding.sources) == 1 else 'ies'}")
    if args.out:
        Path(args.out).write_text(
            json.dumps(payload, sort_keys=True, indent=2) + "\n",
            encoding="utf-8")
        print(f"wrote {args.out}")
    return EXIT_OK


def cmd_run(args) -> int:
    config = load_config(args.config, args.overrides)
    stages = None
    if args.stages:
        stages = [s.strip() for s in args.stages.split(",") if s.strip()]
    manifest = pipeline.run_stages(config, stages)
    for stage in pipeline.STAGES:
        if stage in manifest["stages"]:
            info = manifest["stages"][stage]
            files = ", ".join(sorted(info["artifacts"]))
            print(f"{stage}: {files} ({info['duration_s']}s)")
    print(f"fingerprint: {manifest['fingerprint']}")
    return EXIT_OK


def cmd_synth(args) -> int:
    spec = synth.SyntheticSpec(
        n_users=args.users,
        minority_fraction=args.minority_fraction,
        signal_strength=args.signal_strength,
        posts_per_user=args.posts,
        vocabulary_size=args.vocab,
        seed=args.seed,
    )
    summary = synth.generate_corpus(spec, args.out)
    print(f"wrote {summary['n_users']} users "
          f"({summary['n_minority']} minority) to {summary['out_dir']}")
    return EXIT_OK


def cmd_report(args) -> int:
    run_dir = Path(args.run_dir)
    json_path = run_dir / "evaluation.json"
    text_path = run_dir / "evaluation.txt"
    if not json_path.is_file():
        raise ConfigError(
            f"no evaluation.json under {run_dir}; run the evaluate stage first")
    if args.json:
        print(json_path.read_text(encoding="utf-8").rstrip())
    else:
        print(text_path.read_text(encoding="utf-8").rstrip())
    return EXIT_OK


_COMMANDS = {
    ("kb", "validate"): cmd_kb_validate,
    ("kb", "show"): cmd_kb_show,
    ("lexicon", "build"): cmd_lexicon_build,
    ("run", None): cmd_run,
    ("synth", None): cmd_synth,
    ("report", None): cmd_report,
}


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    subcommand = getattr(args, f"{args.command}_command", None)
    handler = _COMMANDS[(args.command, subcommand)]
    try:
        return handler(args)
    except (ParseError, ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except MindkbError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
