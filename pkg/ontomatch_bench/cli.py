#!/usr/bin/env python3
"""
Command-line front end of ontomatch-bench.

Each pipeline step is a subcommand. Every run writes its artifacts plus a
``<command>.manifest.json`` run manifest into the output directory.

Usage:
    ontomatch-bench import --input ncit.owl --output ncit.json
    ontomatch-bench preprocess --input ncit.json --output ncit.pre.json
    ontomatch-bench prune --input ncit.pre.json --preserve keep.tsv \\
        --output ncit.pruned.json
    ontomatch-bench extract-equiv --hub hub.json --src a.json --tgt b.json \\
        --output equiv.tsv
    ontomatch-bench gen-subs --src a.json --tgt b.json --equiv equiv.tsv \\
        --output subs.tsv --output-target b.subs.json
    ontomatch-bench sample-cands --tgt b.json --refs equiv.tsv \\
        --idf 50 --neighbour 50 --output cands.jsonl
    ontomatch-bench split --refs equiv.tsv --scheme semi --output-dir splits/
    ontomatch-bench editsim-score --src a.json --tgt b.json --candidates cands.jsonl \\
        --output scored.jsonl
    ontomatch-bench rank-eval --candidates scored.jsonl --output ranking.json
    ontomatch-bench editsim-match --src a.json --tgt b.json --output editsim.tsv
    ontomatch-bench match-eval --pred editsim.tsv --refs equiv.tsv \\
        --eval splits/test.tsv --output matching.json

Exit status: 0 on success, 1 on usage errors, 2 on data errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from ontomatch_bench import __version__
from ontomatch_bench.datasets import (
    HubTable,
    build_subsumption_dataset,
    extract_equivalence,
    prune,
    read_preserved_set,
)
from ontomatch_bench.editsim import (
    EditSimMatcher,
    MatcherConfig,
    score_candidates,
    threshold_sweep,
)
from ontomatch_bench.exceptions import OntoBenchError, SchemaError
from ontomatch_bench.importers import (
    DEFAULT_SYNONYM_PROPERTIES,
    DEFAULT_XREF_PROPERTIES,
    ImportConfig,
    RDFXMLSubsetReader,
    load_ontology,
    preprocess,
    save_ontology,
)
from ontomatch_bench.manifest import RunManifest
from ontomatch_bench.mappings import MappingSet, Relation, read_mappings, write_mappings
from ontomatch_bench.metrics import (
    DEFAULT_KS,
    SplitScheme,
    global_matching_metrics,
    hit_accuracy,
    local_ranking_metrics,
    split_references,
    to_report_dict,
)
from ontomatch_bench.sampling import (
    DEFAULT_MAX_HOPS,
    SamplingPlan,
    build_inverted_index,
    generate_candidate_records,
    read_candidates,
    write_candidates,
)
from ontomatch_bench.tokenization import Tokenizer

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2

# Options that never reach the manifest's config snapshot.
_RUNTIME_OPTIONS = {
    "command",
    "config",
    "verbose",
    "quiet",
    "jobs",
    "handler",
    "strategies_from_cli",
}


class UsageError(Exception):
    """Invalid combination of command-line options."""


class _StrategyAction(argparse.Action):
    """
    Collect (strategy, count) pairs in command-line order.

    Strategies given on the command line replace those from a config file.
    """

    def __call__(
        self,
        parser: argparse.ArgumentParser,
        namespace: argparse.Namespace,
        values: Any,
        option_string: Optional[str] = None,
    ) -> None:
        strategies: List[Any] = []
        if getattr(namespace, "strategies_from_cli", False):
            strategies = list(getattr(namespace, self.dest) or [])
        namespace.strategies_from_cli = True
        strategies.append([option_string.lstrip("-") if option_string else "", values])
        setattr(namespace, self.dest, strategies)


# ----------------------------------------------------------------------
# Helpers
# ----------------------------------------------------------------------


def _write_json(path: Path, data: Any) -> None:
    path.write_text(
        json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )


def _prepare(path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def _report_path(output: Path) -> Path:
    return output.with_name(output.name + ".report.json")


def _config_snapshot(args: argparse.Namespace) -> Dict[str, Any]:
    snapshot: Dict[str, Any] = {}
    for key, value in sorted(vars(args).items()):
        if key in _RUNTIME_OPTIONS or isinstance(value, Path):
            continue
        if isinstance(value, list) and any(isinstance(v, Path) for v in value):
            continue
        if isinstance(value, (Relation, SplitScheme)):
            value = value.value
        snapshot[key] = value
    return snapshot


def _finish(
    args: argparse.Namespace,
    directory: Path,
    inputs: Mapping[str, Path],
    outputs: Mapping[str, Path],
) -> None:
    manifest = RunManifest.create(
        command=args.command,
        version=__version__,
        seed=args.seed,
        config=_config_snapshot(args),
        inputs=inputs,
        outputs=outputs,
    )
    manifest.write(directory)


def _tokenizer(args: argparse.Namespace) -> Tokenizer:
    return Tokenizer.from_vocab_file(args.vocab)


def _progress(args: argparse.Namespace) -> bool:
    return not args.quiet


# ----------------------------------------------------------------------
# Subcommands
# ----------------------------------------------------------------------


def cmd_import(args: argparse.Namespace) -> None:
    reader = RDFXMLSubsetReader(args.base_iri or args.input.resolve().as_uri())
    onto = reader.read(args.input.read_bytes())
    output = _prepare(args.output)
    save_ontology(onto, output)
    report = _report_path(output)
    _write_json(report, reader.report.to_dict())
    _finish(
        args,
        output.parent,
        {"input": args.input},
        {"ontology": output, "report": report},
    )


def cmd_preprocess(args: argparse.Namespace) -> None:
    cfg = ImportConfig(
        xref_properties=list(args.xref_properties),
        synonym_properties=list(args.synonym_properties),
        drop_deprecated=not args.keep_deprecated,
    )
    onto = preprocess(load_ontology(args.input), cfg)
    output = _prepare(args.output)
    save_ontology(onto, output)
    _finish(args, output.parent, {"input": args.input}, {"ontology": output})


def cmd_prune(args: argparse.Namespace) -> None:
    onto = load_ontology(args.input)
    inputs = {"input": args.input}
    if args.preserve is not None:
        preserved = read_preserved_set(args.preserve)
        inputs["preserve"] = args.preserve
    else:
        if args.onto_id is None:
            raise UsageError("--hub requires --onto-id")
        preserved = HubTable.load(args.hub).members(args.onto_id)
        inputs["hub"] = args.hub
    pruned = prune(onto, preserved)
    output = _prepare(args.output)
    save_ontology(pruned, output)
    _finish(args, output.parent, inputs, {"ontology": output})


def cmd_extract_equiv(args: argparse.Namespace) -> None:
    hub = HubTable.load(args.hub)
    equiv = extract_equivalence(
        hub, load_ontology(args.src), load_ontology(args.tgt), args.src_id, args.tgt_id
    )
    output = _prepare(args.output)
    write_mappings(equiv, output)
    _finish(
        args,
        output.parent,
        {"hub": args.hub, "src": args.src, "tgt": args.tgt},
        {"mappings": output},
    )


def cmd_gen_subs(args: argparse.Namespace) -> None:
    onto_src = load_ontology(args.src)
    onto_tgt = load_ontology(args.tgt)
    equiv = read_mappings(args.equiv, Relation.EQUIVALENCE)
    result = build_subsumption_dataset(onto_src, onto_tgt, equiv, seed=args.seed)

    output = _prepare(args.output)
    write_mappings(MappingSet(result.subs_mappings, Relation.SUBSUMPTION), output)
    target = _prepare(args.output_target)
    save_ontology(result.modified_target, target)
    report = _report_path(output)
    _write_json(report, result.to_report())
    _finish(
        args,
        output.parent,
        {"src": args.src, "tgt": args.tgt, "equiv": args.equiv},
        {"mappings": output, "target": target, "report": report},
    )


def cmd_sample_cands(args: argparse.Namespace) -> None:
    if not args.strategies:
        raise UsageError("at least one of --idf, --neighbour, --random is required")
    task = Relation(args.task)
    if task is Relation.SUBSUMPTION and args.equiv_refs is None:
        logger.warning(
            "Subsumption task without --equiv-refs; equivalence partners unknown"
        )

    plan = SamplingPlan(
        strategies=tuple((name, int(count)) for name, count in args.strategies),
        max_hops=args.max_hops,
        seed=args.seed,
    )
    onto_tgt = load_ontology(args.tgt)
    full_refs = MappingSet(relation=task)
    for path in args.refs:
        full_refs = full_refs | read_mappings(path, task)
    targets = read_mappings(args.only, task) if args.only else full_refs
    equiv_refs = None
    if args.equiv_refs:
        equiv_refs = read_mappings(args.equiv_refs, Relation.EQUIVALENCE)
    equiv_tgt = load_ontology(args.equiv_tgt) if args.equiv_tgt else None

    index = build_inverted_index(onto_tgt, args.synonym_properties, _tokenizer(args))
    records = generate_candidate_records(
        targets,
        plan,
        index,
        onto_tgt,
        equiv_refs=equiv_refs,
        invalid_refs=full_refs,
        equiv_tgt=equiv_tgt,
        jobs=args.jobs,
        progress=_progress(args),
    )
    output = _prepare(args.output)
    write_candidates(records, output)

    inputs: Dict[str, Path] = {"tgt": args.tgt}
    inputs.update({f"refs[{i}]": p for i, p in enumerate(args.refs)})
    if args.only:
        inputs["only"] = args.only
    if args.equiv_refs:
        inputs["equiv_refs"] = args.equiv_refs
    if args.equiv_tgt:
        inputs["equiv_tgt"] = args.equiv_tgt
    if args.vocab:
        inputs["vocab"] = args.vocab
    _finish(args, output.parent, inputs, {"candidates": output})


def cmd_split(args: argparse.Namespace) -> None:
    refs = read_mappings(args.refs, Relation(args.relation))
    bundle = split_references(refs, SplitScheme.parse(args.scheme), seed=args.seed)
    out_dir = args.output_dir
    out_dir.mkdir(parents=True, exist_ok=True)
    outputs: Dict[str, Path] = {}
    for name, part in bundle.parts().items():
        path = out_dir / f"{name}.tsv"
        write_mappings(part, path)
        outputs[name] = path
    _finish(args, out_dir, {"refs": args.refs}, outputs)


def cmd_rank_eval(args: argparse.Namespace) -> None:
    records = read_candidates(args.candidates)
    report = local_ranking_metrics(records, args.ks)
    output = _prepare(args.output)
    _write_json(output, to_report_dict(ranking=report))
    _finish(args, output.parent, {"candidates": args.candidates}, {"report": output})


def cmd_match_eval(args: argparse.Namespace) -> None:
    relation = Relation(args.relation)
    m_out = read_mappings(args.pred, relation)
    m_ref = read_mappings(args.refs, relation)
    m_eval = read_mappings(args.eval, relation) if args.eval else None
    report = global_matching_metrics(m_out, m_ref, m_eval, beta=args.beta)
    accuracy = None
    if args.hit_accuracy:
        accuracy = hit_accuracy(m_out, m_ref if m_eval is None else m_eval)

    output = _prepare(args.output)
    _write_json(output, to_report_dict(matching=report, accuracy=accuracy))
    inputs = {"pred": args.pred, "refs": args.refs}
    if args.eval:
        inputs["eval"] = args.eval
    _finish(args, output.parent, inputs, {"report": output})


def cmd_editsim_match(args: argparse.Namespace) -> None:
    sweep = sorted(set(args.sweep or []))
    if sweep and args.refs is None:
        raise UsageError("--sweep requires --refs")

    config = MatcherConfig(
        threshold=min([args.threshold, *sweep]),
        candidate_k=args.candidate_k,
        synonym_properties=tuple(args.synonym_properties),
        one_best=not args.all_above_threshold,
    )
    onto_src = load_ontology(args.src)
    onto_tgt = load_ontology(args.tgt)
    index = build_inverted_index(onto_tgt, args.synonym_properties, _tokenizer(args))
    matched = EditSimMatcher(config).match(
        onto_src, onto_tgt, index, jobs=args.jobs, progress=_progress(args)
    )
    kept = MappingSet(
        (m for m in matched if (m.score or 0.0) >= args.threshold), Relation.EQUIVALENCE
    )

    output = _prepare(args.output)
    write_mappings(kept, output)
    inputs = {"src": args.src, "tgt": args.tgt}
    outputs = {"mappings": output}
    if sweep:
        m_ref = read_mappings(args.refs, Relation.EQUIVALENCE)
        m_eval = read_mappings(args.eval, Relation.EQUIVALENCE) if args.eval else None
        points = threshold_sweep(matched, m_ref, m_eval, sweep, args.beta)
        table = [
            {"threshold": p.threshold, **to_report_dict(matching=p.report)}
            for p in points
        ]
        sweep_path = output.with_name(output.name + ".sweep.json")
        _write_json(sweep_path, table)
        outputs["sweep"] = sweep_path
        inputs["refs"] = args.refs
        if args.eval:
            inputs["eval"] = args.eval
    if args.vocab:
        inputs["vocab"] = args.vocab
    _finish(args, output.parent, inputs, outputs)


def cmd_editsim_score(args: argparse.Namespace) -> None:
    records = read_candidates(args.candidates)
    scored = score_candidates(
        records,
        load_ontology(args.src),
        load_ontology(args.tgt),
        args.synonym_properties,
        progress=_progress(args),
    )
    output = _prepare(args.output)
    write_candidates(scored, output)
    _finish(
        args,
        output.parent,
        {"src": args.src, "tgt": args.tgt, "candidates": args.candidates},
        {"candidates": output},
    )


def cmd_stats(args: argparse.Namespace) -> None:
    stats = load_ontology(args.input).stats()
    output = _prepare(args.output)
    _write_json(output, stats.to_dict())
    _finish(args, output.parent, {"input": args.input}, {"stats": output})


# ----------------------------------------------------------------------
# Parser
# ----------------------------------------------------------------------


def _float_list(text: str) -> List[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected comma-separated numbers, got {text!r}"
        )


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--seed", type=int, default=42, help="Global seed (default: 42)"
    )
    common.add_argument(
        "--jobs",
        type=int,
        default=1,
        help="Worker threads for per-item work (default: 1)",
    )
    common.add_argument("--config", type=Path, help="JSON file with option defaults")
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    verbosity.add_argument(
        "-q", "--quiet", action="store_true", help="Warnings only, no progress bars"
    )
    return common


def _label_options(parser: argparse.ArgumentParser, vocab: bool = True) -> None:
    parser.add_argument(
        "--synonym-properties",
        nargs="+",
        default=list(DEFAULT_SYNONYM_PROPERTIES),
        help="Annotation properties whose values are class labels",
    )
    if vocab:
        parser.add_argument(
            "--vocab", type=Path, help="Sub-word vocabulary file (one token per line)"
        )


def _relation_option(parser: argparse.ArgumentParser, flag: str = "--relation") -> None:
    parser.add_argument(
        flag,
        choices=[r.value for r in Relation],
        default=Relation.EQUIVALENCE.value,
    )


SUBCOMMANDS: Dict[str, Tuple[Callable[[argparse.Namespace], None], str]] = {
    "import": (cmd_import, "Convert RDF/XML to a JSON snapshot"),
    "preprocess": (cmd_preprocess, "Drop deprecated classes and cross-references"),
    "prune": (cmd_prune, "Keep only a preserved class set"),
    "extract-equiv": (cmd_extract_equiv, "Extract equivalences from a hub table"),
    "gen-subs": (cmd_gen_subs, "Derive subsumption mappings from equivalences"),
    "sample-cands": (cmd_sample_cands, "Generate negative candidates"),
    "split": (cmd_split, "Split reference mappings"),
    "rank-eval": (cmd_rank_eval, "Compute MRR and Hits@K"),
    "match-eval": (cmd_match_eval, "Compute precision, recall and F-score"),
    "editsim-match": (cmd_editsim_match, "Run the EditSim matcher"),
    "editsim-score": (cmd_editsim_score, "Score candidate files with EditSim"),
    "stats": (cmd_stats, "Print ontology statistics"),
}


def build_parser() -> Tuple[
    argparse.ArgumentParser, Dict[str, argparse.ArgumentParser]
]:
    """Build the top-level parser and return it with its subparsers by name."""
    parser = argparse.ArgumentParser(
        prog="ontomatch-bench",
        description="Build ontology matching benchmarks and evaluate matchers",
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    common = _common_options()
    subparsers: Dict[str, argparse.ArgumentParser] = {}
    for name, (handler, help_text) in SUBCOMMANDS.items():
        subparsers[name] = sub.add_parser(name, parents=[common], help=help_text)
        subparsers[name].set_defaults(handler=handler)

    p = subparsers["import"]
    p.add_argument("--input", type=Path, required=True, help="RDF/XML file")
    p.add_argument("--output", type=Path, required=True, help="JSON snapshot to write")
    p.add_argument("--base-iri", help="Base IRI for relative references")

    p = subparsers["preprocess"]
    p.add_argument("--input", type=Path, required=True)
    p.add_argument("--output", type=Path, required=True)
    p.add_argument(
        "--xref-properties", nargs="+", default=list(DEFAULT_XREF_PROPERTIES)
    )
    p.add_argument("--keep-deprecated", action="store_true")
    _label_options(p, vocab=False)

    p = subparsers["prune"]
    p.add_argument("--input", type=Path, required=True)
    p.add_argument("--output", type=Path, required=True)
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument(
        "--preserve", type=Path, help="File with one preserved IRI per line"
    )
    source.add_argument("--hub", type=Path, help="Hub table; preserve its members")
    p.add_argument("--onto-id", help="Ontology ID of the input in the hub table")

    p = subparsers["extract-equiv"]
    p.add_argument("--hub", type=Path, required=True)
    p.add_argument("--src", type=Path, required=True)
    p.add_argument("--tgt", type=Path, required=True)
    p.add_argument("--src-id", help="Source ontology ID in the hub table")
    p.add_argument("--tgt-id", help="Target ontology ID in the hub table")
    p.add_argument("--output", type=Path, required=True)

    p = subparsers["gen-subs"]
    p.add_argument("--src", type=Path, required=True)
    p.add_argument("--tgt", type=Path, required=True)
    p.add_argument(
        "--equiv", type=Path, required=True, help="Equivalence mappings TSV"
    )
    p.add_argument(
        "--output", type=Path, required=True, help="Subsumption mappings TSV"
    )
    p.add_argument(
        "--output-target", type=Path, required=True, help="Modified target snapshot"
    )

    p = subparsers["sample-cands"]
    p.add_argument("--tgt", type=Path, required=True)
    p.add_argument(
        "--refs",
        type=Path,
        nargs="+",
        required=True,
        help="Reference mapping files; all of them count as invalid candidates",
    )
    p.add_argument(
        "--only", type=Path, help="Generate candidates only for these mappings"
    )
    p.add_argument(
        "--equiv-refs", type=Path, help="Equivalences behind subsumption refs"
    )
    p.add_argument(
        "--equiv-tgt",
        type=Path,
        help="Target ontology before gen-subs deleted classes from it",
    )
    _relation_option(p, "--task")
    for strategy in ("idf", "neighbour", "random"):
        p.add_argument(
            f"--{strategy}",
            type=int,
            dest="strategies",
            action=_StrategyAction,
            metavar="N",
            help=f"Draw N negatives with {strategy} sampling",
        )
    p.add_argument("--max-hops", type=int, default=DEFAULT_MAX_HOPS)
    p.add_argument("--output", type=Path, required=True, help="Candidate JSONL file")
    _label_options(p)

    p = subparsers["split"]
    p.add_argument("--refs", type=Path, required=True)
    p.add_argument(
        "--scheme",
        choices=["unsupervised", "semi", "semi_supervised", "semi-supervised"],
        default="unsupervised",
    )
    _relation_option(p)
    p.add_argument("--output-dir", type=Path, required=True)

    p = subparsers["rank-eval"]
    p.add_argument(
        "--candidates", type=Path, required=True, help="Scored candidate JSONL"
    )
    p.add_argument("--ks", type=int, nargs="+", default=list(DEFAULT_KS))
    p.add_argument("--output", type=Path, required=True)

    p = subparsers["match-eval"]
    p.add_argument("--pred", type=Path, required=True, help="System output mappings")
    p.add_argument("--refs", type=Path, required=True, help="Full reference mappings")
    p.add_argument("--eval", type=Path, help="Evaluation split (e.g. test.tsv)")
    _relation_option(p)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--hit-accuracy", action="store_true")
    p.add_argument("--output", type=Path, required=True)

    p = subparsers["editsim-match"]
    p.add_argument("--src", type=Path, required=True)
    p.add_argument("--tgt", type=Path, required=True)
    p.add_argument("--threshold", type=float, default=0.9)
    p.add_argument("--candidate-k", type=int, default=200)
    p.add_argument("--all-above-threshold", action="store_true")
    p.add_argument("--sweep", type=_float_list, help="Comma-separated thresholds")
    p.add_argument("--refs", type=Path, help="Reference mappings for --sweep")
    p.add_argument("--eval", type=Path, help="Evaluation split for --sweep")
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--output", type=Path, required=True)
    _label_options(p)

    p = subparsers["editsim-score"]
    p.add_argument("--src", type=Path, required=True)
    p.add_argument("--tgt", type=Path, required=True)
    p.add_argument("--candidates", type=Path, required=True)
    p.add_argument("--output", type=Path, required=True)
    _label_options(p, vocab=False)

    p = subparsers["stats"]
    p.add_argument("--input", type=Path, required=True)
    p.add_argument("--output", type=Path, required=True)

    return parser, subparsers


def load_config(path: Path, command: str) -> Dict[str, Any]:
    """
    Read option defaults for one subcommand from a JSON config file.

    Top-level keys apply to every subcommand; a nested object under the
    subcommand's name overrides them.

    Raises:
        SchemaError: If the file is not a JSON object.
    """
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise SchemaError("$", f"invalid JSON config: {e}") from e
    if not isinstance(data, dict):
        raise SchemaError("$", "config must be a JSON object")

    section = data.get(command, {})
    if not isinstance(section, dict):
        raise SchemaError(command, "subcommand section must be an object")
    merged = {k: v for k, v in data.items() if k not in SUBCOMMANDS}
    merged.update(section)
    return {key.replace("-", "_"): value for key, value in merged.items()}


def _apply_config(
    subparser: argparse.ArgumentParser, config: Dict[str, Any]
) -> None:
    known = {action.dest: action for action in subparser._actions}
    defaults: Dict[str, Any] = {}
    for key, value in config.items():
        action = known.get(key)
        if action is None or key in _RUNTIME_OPTIONS - {"jobs"}:
            logger.debug(f"Ignoring config key {key!r}")
            continue
        if action.type is Path and value is not None:
            value = [Path(v) for v in value] if isinstance(value, list) else Path(value)
        defaults[key] = value
    subparser.set_defaults(**defaults)


def _configure_logging(verbose: bool, quiet: bool) -> None:
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )
    logging.getLogger().setLevel(level)


def _parse(argv: Sequence[str]) -> argparse.Namespace:
    parser, subparsers = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_usage(sys.stderr)
        raise UsageError("a subcommand is required")
    if args.config is not None:
        try:
            config = load_config(args.config, args.command)
        except OSError as e:
            raise SchemaError(str(args.config), f"cannot read config: {e}") from e
        _apply_config(subparsers[args.command], config)
        args = parser.parse_args(argv)
    return args


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run the command line.

    Args:
        argv: Arguments without the program name. Defaults to ``sys.argv[1:]``.

    Returns:
        int: Exit status.
    """
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = _parse(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE
    except UsageError as e:
        print(f"ontomatch-bench: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OntoBenchError as e:
        print(f"ontomatch-bench: error: {e}", file=sys.stderr)
        return EXIT_DATA

    _configure_logging(args.verbose, args.quiet)
    try:
        args.handler(args)
    except UsageError as e:
        logger.error(str(e))
        return EXIT_USAGE
    except (OntoBenchError, OSError) as e:
        logger.error(f"{args.command} failed: {e}")
        return EXIT_DATA
    except ValueError as e:
        logger.error(f"Invalid option value: {e}")
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
