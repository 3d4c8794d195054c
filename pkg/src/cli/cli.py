import argparse
import json
import logging
import os
import sys
from typing import Any, Dict, List, Optional, Sequence

from pydantic import ValidationError

from src.arborescence.completion import validate_spanning_tree
from src.arborescence.sampler import TreeSampler, sample_batch
from src.decomposition.Decomposition import Decomposition
from src.decomposition.decomposer import (
    decomposition_document,
    decomposition_from_document,
    default_phi,
    strong_decompose,
    trivial_decomposition,
    verify_decomposition,
    weak_decompose,
)
from src.graph.Graph import Graph
from src.graph.graph_utils import (
    complete_bipartite_graph,
    complete_graph,
    erdos_renyi_graph,
    grid_graph,
    load_graph,
    lollipop_graph,
    path_graph,
    serialize_graph,
    star_graph,
)
from src.logger.Logger import Logger
from src.models.Algorithms import AlgorithmEnum, EpsBudgetEnum, OutputFormatEnum
from src.models.Errors import (
    DecompositionError,
    GraphParseError,
    SrstError,
    StatisticalTestError,
)
from src.oracle.matrix_tree import count_spanning_trees
from src.oracle.uniformity import uniformity_test
from src.schemas.DecompositionDTO import DecompositionDTO
from src.schemas.RunConfigDTO import RunConfigDTO
from src.tables.transition_tables import dump_tables
from src.utils.data.data_utils import (
    create_folders,
    format_key_values,
    format_trees,
    parse_trees,
    read_input_text,
    summarize,
)
from src.utils.RandomStream import RandomStream, spawn_seeds
from src.utils.settings import CHI_SQUARE_ALPHA, DEFAULT_SEED, EPS_BUDGET, TV_THRESHOLD
from src.walk.walker import measure_walk

GENERATORS = ("complete", "path", "star", "grid", "bipartite", "lollipop", "erdos-renyi")


def _read_graph(path: Optional[str]) -> Graph:
    return load_graph(read_input_text(path))


def _read_decomposition(graph: Graph, path: str) -> Decomposition:
    """
    Dekompozicija iz JSON dokumenta (samostalnog ili ispisa naredbe decompose).

    Raises:
        GraphParseError: Ako dokument nije ispravan JSON.
        DecompositionError: Ako dokument ne odgovara shemi ili grafu.
    """
    text = read_input_text(path)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        error_msg = f"Dokument dekompozicije {path} nije ispravan JSON: {e}"
        logging.error(error_msg)
        raise GraphParseError(error_msg) from e
    if isinstance(data, dict) and "decomposition" in data:
        data = data["decomposition"]
    try:
        document = DecompositionDTO.model_validate(data)
    except ValidationError as e:
        error_msg = f"Dokument dekompozicije {path} ne odgovara shemi: {e}"
        logging.error(error_msg)
        raise DecompositionError(error_msg) from e
    return decomposition_from_document(graph, document)


def _run_config(args: argparse.Namespace) -> RunConfigDTO:
    return RunConfigDTO(
        algorithm=args.algorithm,
        phi=args.phi,
        delta=args.delta,
        eps=args.eps,
        eps_budget=args.eps_budget,
        seed=args.seed,
        samples=args.samples,
        input_path=args.input,
        output_format=args.format,
        workers=args.workers,
        fallback_threshold=args.fallback_threshold,
    )


def cmd_sample(args: argparse.Namespace) -> int:
    """
    Uzorkovanje N stabala; isti config i seed daju identičan ispis.
    """
    config = _run_config(args)
    graph = _read_graph(config.input_path)
    decomposition = (
        _read_decomposition(graph, args.decomposition) if args.decomposition else None
    )

    sampler = TreeSampler(
        graph,
        config.algorithm,
        phi=config.phi,
        delta=config.delta,
        eps=config.eps,
        budget=config.eps_budget,
        decomposition=decomposition,
        fallback_threshold=config.fallback_threshold,
        table_workers=config.workers,
    )
    if args.dump_tables and sampler.tables is not None:
        create_folders(os.path.dirname(args.dump_tables))
        dump_tables(sampler.tables, sampler.eps, graph.n, args.dump_tables)

    results = sample_batch(sampler, config.seed, config.samples, config.workers)
    for tree, _ in results:
        validate_spanning_tree(graph, tree)

    if config.output_format is OutputFormatEnum.EDGES:
        sys.stdout.write(format_trees(tree for tree, _ in results))
    else:
        blocks = [
            format_key_values(
                {
                    "sample": i,
                    **stats.model_dump(exclude_none=True),
                    "total_steps": stats.total_steps,
                }
            )
            for i, (_, stats) in enumerate(results)
        ]
        sys.stdout.write("\n".join(blocks))
    return 0


def cmd_decompose(args: argparse.Namespace) -> int:
    """
    Dokument dekompozicije i izvještaj provjere kao JSON.
    """
    graph = _read_graph(args.input)
    phi = args.phi if args.phi is not None else default_phi(graph.n)
    decomposition = (
        weak_decompose(graph, phi) if args.weak else strong_decompose(graph, phi)
    )
    report = verify_decomposition(graph, decomposition)
    document = {
        "decomposition": decomposition_document(graph, decomposition).model_dump(),
        "verification": {"passed": report.passed, **report.model_dump()},
    }
    sys.stdout.write(json.dumps(document, indent=2) + "\n")
    if not report.passed:
        error_msg = f"Dekompozicija ne zadovoljava: {[c.name for c in report.failures()]}"
        logging.error(error_msg)
        raise DecompositionError(error_msg)
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    """
    Provjera uniformnosti uzorka stabala ili provjera dokumenta dekompozicije.
    """
    graph = _read_graph(args.input)

    if args.decomposition:
        decomposition = _read_decomposition(graph, args.decomposition)
        report = verify_decomposition(graph, decomposition)
        values: Dict[str, Any] = {"passed": report.passed}
        for clause in report.clauses:
            values[f"clause.{clause.name}"] = clause.passed
            if clause.witness:
                values[f"witness.{clause.name}"] = clause.witness
        sys.stdout.write(format_key_values(values))
        if not report.passed:
            error_msg = f"Dekompozicija ne zadovoljava: {[c.name for c in report.failures()]}"
            logging.error(error_msg)
            raise DecompositionError(error_msg)
        return 0

    trees = parse_trees(read_input_text(args.trees))
    distribution = uniformity_test(
        trees, graph, alpha=args.alpha, tv_threshold=args.tv_threshold
    )
    sys.stdout.write(
        format_key_values(
            {
                "passed": distribution.passed,
                "support_size": distribution.support_size,
                "samples": distribution.samples,
                "chi_square": distribution.chi_square,
                "degrees_of_freedom": distribution.degrees_of_freedom,
                "p_value": distribution.p_value,
                "critical_value": distribution.critical_value,
                "total_variation": distribution.total_variation,
                "tv_threshold": distribution.tv_threshold,
                "chi_square_passed": distribution.chi_square_passed,
                "tv_passed": distribution.tv_passed,
            }
        )
    )
    if not distribution.passed:
        error_msg = (
            f"Uzorak nije uniforman: chi2={distribution.chi_square:.3f} "
            f"(kritično {distribution.critical_value:.3f}), "
            f"TV={distribution.total_variation:.4f} (prag {distribution.tv_threshold})"
        )
        logging.error(error_msg)
        raise StatisticalTestError(error_msg)
    return 0


def cmd_count(args: argparse.Namespace) -> int:
    graph = _read_graph(args.input)
    sys.stdout.write(f"{count_spanning_trees(graph)}\n")
    return 0


def cmd_bench(args: argparse.Namespace) -> int:
    """
    Uparena mjerenja broja koraka po algoritmu (isti seed po rundi za sve algoritme).
    """
    graph = _read_graph(args.input)
    phi = args.phi if args.phi is not None else default_phi(graph.n)
    strong = strong_decompose(graph, phi) if not args.trivial else trivial_decomposition(graph)
    weak = weak_decompose(graph, phi) if not args.trivial else strong

    algorithms = [AlgorithmEnum(a) for a in args.algorithms]
    samplers = {
        algorithm: TreeSampler(
            graph,
            algorithm,
            delta=args.delta,
            eps=args.eps,
            decomposition=strong if algorithm is AlgorithmEnum.SHORTCUT_VERTEX else weak,
            fallback_threshold=args.fallback_threshold,
        )
        for algorithm in algorithms
    }

    records: List[Dict[str, Any]] = []
    for run, seed in enumerate(spawn_seeds(args.seed, args.runs)):
        for algorithm, sampler in samplers.items():
            _, stats = sampler.sample(RandomStream(seed))
            records.append(
                {
                    "algorithm": algorithm.value,
                    "run": run,
                    "steps": stats.total_steps,
                    "verbatim_steps": stats.verbatim_steps,
                    "jumps": stats.shortcut_jumps,
                    "fallback": int(stats.fallback),
                }
            )
        measure = measure_walk(graph, strong, RandomStream(seed))
        records.append({"algorithm": "measure", "run": run, **measure.model_dump()})

    summary = summarize(records, "algorithm")
    values: Dict[str, Any] = {
        "n": graph.n,
        "m": graph.m,
        "runs": args.runs,
        "components": strong.k,
        "cut_vertices": len(strong.cut_vertices),
    }
    for algorithm in algorithms:
        row = summary.loc[algorithm.value]
        values[f"{algorithm.value}.mean_steps"] = float(row["steps"])
        values[f"{algorithm.value}.mean_jumps"] = float(row["jumps"])
        values[f"{algorithm.value}.fallback_rate"] = float(row["fallback"])
    measured = summary.loc["measure"]
    for key in ("cover_time", "cut_traversals", "inner_traversals", "inner_traversals_before_cover"):
        values[f"walk.mean_{key}"] = float(measured[key])
    baseline = AlgorithmEnum.ALDOUS_BRODER
    if baseline in samplers:
        for algorithm in algorithms:
            if algorithm is not baseline:
                values[f"{algorithm.value}.step_ratio"] = (
                    values[f"{algorithm.value}.mean_steps"]
                    / max(values[f"{baseline.value}.mean_steps"], 1.0)
                )

    sys.stdout.write(format_key_values(values))
    return 0


def cmd_generate(args: argparse.Namespace) -> int:
    family = args.family
    if family == "complete":
        graph = complete_graph(args.n)
    elif family == "path":
        graph = path_graph(args.n)
    elif family == "star":
        graph = star_graph(args.n)
    elif family == "grid":
        graph = grid_graph(args.rows, args.cols)
    elif family == "bipartite":
        graph = complete_bipartite_graph(args.a, args.b)
    elif family == "lollipop":
        graph = lollipop_graph(args.clique, args.path)
    else:
        graph = erdos_renyi_graph(args.n, args.p, args.seed)
    sys.stdout.write(serialize_graph(graph))
    return 0


def _add_input(parser: argparse.ArgumentParser, required: bool = False) -> None:
    parser.add_argument(
        "-i",
        "--input",
        default=None,
        required=required,
        help="Lista bridova" if required else "Lista bridova (zadano stdin)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="srst",
        description="Slučajna razapinjuća stabla skraćenim slučajnim šetnjama.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    sample = subparsers.add_parser("sample", help="Uzorkovanje razapinjućih stabala")
    _add_input(sample)
    sample.add_argument(
        "--algorithm",
        choices=[a.value for a in AlgorithmEnum],
        default=AlgorithmEnum.SHORTCUT_VERTEX.value,
    )
    sample.add_argument("--phi", type=float, default=None, help="Zadano 1/sqrt(n)")
    sample.add_argument("--delta", type=float, default=0.01)
    sample.add_argument("--eps", type=float, default=None, help="Eksplicitna greška tablica")
    sample.add_argument(
        "--eps-budget", choices=[b.value for b in EpsBudgetEnum], default=EPS_BUDGET
    )
    sample.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sample.add_argument("-n", "--samples", type=int, default=1)
    sample.add_argument(
        "--format",
        choices=[f.value for f in OutputFormatEnum],
        default=OutputFormatEnum.EDGES.value,
    )
    sample.add_argument("--workers", type=int, default=1)
    sample.add_argument("--fallback-threshold", type=int, default=None)
    sample.add_argument("--decomposition", default=None, help="JSON dokument dekompozicije")
    sample.add_argument("--dump-tables", default=None, help="JSON ispis tablica prijelaza")
    sample.set_defaults(handler=cmd_sample)

    decompose = subparsers.add_parser("decompose", help="Dekompozicija i njena provjera")
    _add_input(decompose)
    decompose.add_argument("--phi", type=float, default=None)
    decompose.add_argument("--weak", action="store_true", help="Bez oznake jake dekompozicije")
    decompose.set_defaults(handler=cmd_decompose)

    verify = subparsers.add_parser("verify", help="Test uniformnosti ili provjera dekompozicije")
    _add_input(verify, required=True)
    verify.add_argument("--trees", default=None, help="Stabla (zadano stdin)")
    verify.add_argument("--decomposition", default=None, help="JSON dokument dekompozicije")
    verify.add_argument("--alpha", type=float, default=CHI_SQUARE_ALPHA)
    verify.add_argument("--tv-threshold", type=float, default=TV_THRESHOLD)
    verify.set_defaults(handler=cmd_verify)

    count = subparsers.add_parser("count", help="Broj razapinjućih stabala")
    _add_input(count)
    count.set_defaults(handler=cmd_count)

    bench = subparsers.add_parser("bench", help="Uparena mjerenja broja koraka")
    _add_input(bench)
    bench.add_argument("--phi", type=float, default=None)
    bench.add_argument("--delta", type=float, default=0.01)
    bench.add_argument("--eps", type=float, default=None)
    bench.add_argument("--seed", type=int, default=DEFAULT_SEED)
    bench.add_argument("--runs", type=int, default=10)
    bench.add_argument(
        "--algorithms",
        nargs="+",
        choices=[a.value for a in AlgorithmEnum],
        default=[
            AlgorithmEnum.ALDOUS_BRODER.value,
            AlgorithmEnum.SHORTCUT_EDGE.value,
            AlgorithmEnum.SHORTCUT_VERTEX.value,
        ],
    )
    bench.add_argument("--fallback-threshold", type=int, default=None)
    bench.add_argument("--trivial", action="store_true", help="Svi vrhovi u S (bez kraćenja)")
    bench.set_defaults(handler=cmd_bench)

    generate = subparsers.add_parser("generate", help="Generiranje grafa")
    generate.add_argument("family", choices=GENERATORS)
    generate.add_argument("--n", type=int, default=4)
    generate.add_argument("--rows", type=int, default=3)
    generate.add_argument("--cols", type=int, default=3)
    generate.add_argument("--a", type=int, default=2)
    generate.add_argument("--b", type=int, default=3)
    generate.add_argument("--clique", type=int, default=10)
    generate.add_argument("--path", type=int, default=100)
    generate.add_argument("--p", type=float, default=0.5)
    generate.add_argument("--seed", type=int, default=DEFAULT_SEED)
    generate.set_defaults(handler=cmd_generate)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Ulazna točka; vraća izlazni kod (0 uspjeh, 2 neispravni argumenti, ostalo po klasi greške).
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    logger = Logger(__file__, args.command)
    try:
        exit_code = args.handler(args)
    except SrstError as e:
        sys.stderr.write(f"srst: {e}\n")
        exit_code = e.exit_code
    except ValidationError as e:
        logging.error(f"Neispravna konfiguracija: {e}")
        sys.stderr.write(f"srst: neispravna konfiguracija: {e}\n")
        exit_code = 4
    finally:
        logger.script_exec_time()

    return exit_code


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
