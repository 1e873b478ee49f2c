"""Command-line entry points for reproducible clustering runs.

Four subcommands share one pipeline: build a graph, fit the model with a
fixed or trainable latent graph, then write a self-describing bundle of
artifacts into --out: soft/hard assignment CSVs, the reconstructed graph
in matrix text format, a cut report, the loss trace, an SVG plot of the
soft assignments, and a run manifest with input digests and seeds.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .evaluate import cut_report
from .graphs import AdjacencyMatrix, ValidationError, load_matrix_text, save_matrix_text, total_normalize
from .ingest import (
    bundled_dict_path,
    bundled_word_list_path,
    gen_bicliques,
    letter_bigram_graph,
    load_edge_list,
    load_word_list,
    parse_pronouncing_dict,
    phoneme_bigram_graph,
)
from .model import LatentGraph, diagonal_latent, offdiagonal_latent, paired_latent
from .optimize import FitConfig, FitResult, fit
from .plots import bar_chart_svg, heatmap_svg, ternary_svg


def _latent_from_file(path: str) -> LatentGraph:
    M, _ = load_matrix_text(path)
    if M.shape[0] != M.shape[1]:
        raise ValidationError(f"latent graph in {path} is not square: {M.shape}")
    if np.abs(M - M.T).max() > 1e-9 * max(1.0, np.abs(M).max()):
        raise ValidationError("latent graph not symmetric")
    if (M < 0).any():
        raise ValidationError(f"latent graph in {path} has negative entries")
    return LatentGraph(total_normalize(M))


def _parse_latent(choice: str, named: dict[str, object]) -> LatentGraph:
    if choice.startswith("file:"):
        return _latent_from_file(choice[len("file:"):])
    try:
        builder = named[choice]
    except KeyError:
        choices = ", ".join(sorted(named)) + ", file:<path>"
        raise ValidationError(f"unknown latent graph {choice!r} (choices: {choices})") from None
    return builder()


def _sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _fit_config(args) -> FitConfig:
    return FitConfig(
        seed=args.seed,
        reg_coefficient=args.reg,
        restarts=args.restarts,
    )


def _write_bundle(outdir: Path, A: AdjacencyMatrix, result: FitResult,
                  manifest: dict, started: float) -> None:
    outdir.mkdir(parents=True, exist_ok=True)
    labels = list(A.node_labels) if A.node_labels else [f"n{i:03d}" for i in range(A.n)]
    m = result.W.m
    S = result.soft.probs

    header = "node," + ",".join(f"p{j}" for j in range(m))
    rows = [header]
    for name, row in zip(labels, S):
        rows.append(name + "," + ",".join(f"{x:.12g}" for x in row))
    (outdir / "soft_assignments.csv").write_text("\n".join(rows) + "\n", encoding="utf-8")

    rows = ["node,cluster"]
    rows += [f"{name},{int(c)}" for name, c in zip(labels, result.hard)]
    (outdir / "hard_assignments.csv").write_text("\n".join(rows) + "\n", encoding="utf-8")

    save_matrix_text(outdir / "b_matrix.txt", result.B.weights, labels)

    report = cut_report(A, result.hard, m)
    (outdir / "cut_report.json").write_text(
        json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )

    rows = ["iteration,loss"]
    rows += [f"{i},{v:.12g}" for i, v in enumerate(result.loss_trace)]
    (outdir / "loss_trace.csv").write_text("\n".join(rows) + "\n", encoding="utf-8")

    if m == 2:
        order = np.argsort(S[:, 0], kind="stable")
        svg = bar_chart_svg(
            S[order, 0],
            [labels[i] for i in order],
            "Assignment probability for cluster 0, ascending",
            "p(cluster 0)",
        )
        plot_name = "assignments_bar.svg"
    elif m == 3:
        svg = ternary_svg(S, labels, "Soft cluster assignments")
        plot_name = "assignments_ternary.svg"
    else:
        svg = heatmap_svg(S, labels, [f"p{j}" for j in range(m)], "Soft cluster assignments")
        plot_name = "assignments_heatmap.svg"
    (outdir / plot_name).write_text(svg, encoding="utf-8")

    manifest = dict(manifest)
    manifest.update(
        version=__version__,
        seed_used=int(result.seed_used),
        converged=bool(result.converged),
        iterations=int(result.iterations),
        final_loss=float(result.final_loss),
        data_term=float(result.data_term),
        duration_seconds=round(time.monotonic() - started, 3),
    )
    (outdir / "run_manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def _run(args, A: AdjacencyMatrix, latent, inputs: dict[str, str], command: str) -> None:
    started = time.monotonic()
    config = _fit_config(args)
    result = fit(A, latent, config)
    manifest = {
        "command": command,
        "argv": [str(a) for a in (args._argv or [])],
        "config": {
            "seed": config.seed,
            "restarts": config.restarts,
            "reg_coefficient": config.reg_coefficient,
            "memory": config.memory,
            "grad_tolerance": config.grad_tolerance,
            "rel_f_tolerance": config.rel_f_tolerance,
            "max_iterations": config.max_iterations,
            "init_half_width": config.init_half_width,
        },
        "seeds": list(range(config.seed, config.seed + config.restarts)),
        "input_digests": {name: _sha256(path) for name, path in inputs.items()},
        "nodes": A.n,
        "latent_nodes": result.W.m,
    }
    _write_bundle(Path(args.out), A, result, manifest, started)
    print(f"{command}: fitted {A.n} nodes -> {result.W.m} clusters; "
          f"final loss {result.final_loss:.6f} (data term {result.data_term:.6f}), "
          f"seed {result.seed_used}; wrote {args.out}")


def _cmd_synth(args) -> None:
    A = gen_bicliques(args.k, args.a, args.b)
    named = {
        "clique3": lambda: diagonal_latent(args.k),
        "biclique2": lambda: offdiagonal_latent(2),
        "exact6": lambda: paired_latent(args.k),
    }
    latent = _parse_latent(args.latent, named)
    inputs = {}
    if args.latent.startswith("file:"):
        inputs["latent"] = args.latent[len("file:"):]
    _run(args, A, latent, inputs, "synth")


def _ortho_phono_latent(args) -> LatentGraph:
    named = {
        "bi": lambda: offdiagonal_latent(2),
        "tri": lambda: offdiagonal_latent(3),
    }
    return _parse_latent(args.latent, named)


def _cmd_ortho(args) -> None:
    words_path = args.words or bundled_word_list_path()
    words = load_word_list(words_path)
    if not words:
        raise ValidationError(f"word list {words_path} has no usable words")
    A = letter_bigram_graph(words)
    latent = _ortho_phono_latent(args)
    inputs = {"words": words_path}
    if args.latent.startswith("file:"):
        inputs["latent"] = args.latent[len("file:"):]
    _run(args, A, latent, inputs, "ortho")


def _cmd_phono(args) -> None:
    words_path = args.words or bundled_word_list_path()
    dict_path = args.dict or bundled_dict_path()
    words = load_word_list(words_path)
    if not words:
        raise ValidationError(f"word list {words_path} has no usable words")
    pron = parse_pronouncing_dict(dict_path)
    A = phoneme_bigram_graph(words, pron)
    latent = _ortho_phono_latent(args)
    inputs = {"words": words_path, "dict": dict_path}
    if args.latent.startswith("file:"):
        inputs["latent"] = args.latent[len("file:"):]
    _run(args, A, latent, inputs, "phono")


def _cmd_fit(args) -> None:
    if args.m < 1:
        raise ValidationError(f"--m must be >= 1, got {args.m}")
    if args.train_w and args.latent:
        raise ValidationError("--latent and --train-w are mutually exclusive")
    A = load_edge_list(args.graph)
    inputs = {"graph": args.graph}
    if args.train_w:
        latent = args.m
    else:
        if not args.latent:
            raise ValidationError("either --latent file:<path> or --train-w is required")
        if not args.latent.startswith("file:"):
            raise ValidationError("fit takes the latent graph from a file: --latent file:<path>")
        latent = _latent_from_file(args.latent[len("file:"):])
        if latent.m != args.m:
            raise ValidationError(
                f"--m {args.m} does not match the {latent.m}-node latent graph"
            )
        inputs["latent"] = args.latent[len("file:"):]
    _run(args, A, latent, inputs, "fit")


def _add_common(p: argparse.ArgumentParser, restarts: int, out: str) -> None:
    p.add_argument("--seed", type=int, default=0, help="base RNG seed (default 0)")
    p.add_argument("--restarts", type=int, default=restarts,
                   help=f"number of seeded restarts, best kept (default {restarts})")
    p.add_argument("--reg", type=float, default=0.1,
                   help="L2 coefficient on the mean squared free parameter (default 0.1)")
    p.add_argument("--out", default=out, help=f"output directory (default {out})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="latentstep",
        description="Factor a weighted graph through a small latent graph: "
                    "soft clustering plus a low-rank reconstruction.",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("synth", help="fit a union-of-bicliques benchmark graph")
    p.add_argument("--k", type=int, default=3, help="number of bicliques (default 3)")
    p.add_argument("--a", type=int, default=10, help="left side size (default 10)")
    p.add_argument("--b", type=int, default=10, help="right side size (default 10)")
    p.add_argument("--latent", required=True,
                   help="clique3 | biclique2 | exact6 | file:<path>")
    _add_common(p, restarts=10, out="runs/synth")
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("ortho", help="cluster the letter-adjacency graph of a word list")
    p.add_argument("--words", default=None, help="word list path (default: bundled 10k list)")
    p.add_argument("--latent", default="bi", help="bi | tri | file:<path> (default bi)")
    _add_common(p, restarts=10, out="runs/ortho")
    p.set_defaults(func=_cmd_ortho)

    p = sub.add_parser("phono", help="cluster the phoneme-adjacency graph of a word list")
    p.add_argument("--words", default=None, help="word list path (default: bundled 10k list)")
    p.add_argument("--dict", default=None,
                   help="pronouncing dictionary path (default: bundled cmudict)")
    p.add_argument("--latent", default="tri", help="bi | tri | file:<path> (default tri)")
    _add_common(p, restarts=10, out="runs/phono")
    p.set_defaults(func=_cmd_phono)

    p = sub.add_parser("fit", help="fit a graph given as a TSV edge list")
    p.add_argument("--graph", required=True, help="edge list: i<TAB>j<TAB>weight per line")
    p.add_argument("--m", type=int, required=True, help="number of latent nodes")
    p.add_argument("--latent", default=None, help="file:<path> with a fixed latent graph")
    p.add_argument("--train-w", action="store_true", help="train the latent graph too")
    _add_common(p, restarts=1, out="runs/fit")
    p.set_defaults(func=_cmd_fit)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args._argv = list(argv) if argv is not None else sys.argv[1:]
    try:
        args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # runtime failure: exit 1 per interface contract
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
