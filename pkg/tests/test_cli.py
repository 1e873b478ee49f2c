import json
import math

import numpy as np
import pytest

from latentstep import diagonal_latent, gen_bicliques, save_matrix_text
from latentstep.cli import main

DICT_FIXTURE = """\
;;; fixture dictionary
ABOUT  AH0 B AW1 T
CAT  K AE1 T
TACK  T AE1 K
ACT  AE1 K T
NOON  N UW1 N
TUNE  T UW1 N
"""


def write_biclique_edge_list(path, k=3, a=10, b=10):
    A = gen_bicliques(k, a, b)
    lines = []
    for i in range(A.n):
        for j in range(i + 1, A.n):
            if A.weights[i, j] > 0:
                lines.append(f"{i}\t{j}\t{A.weights[i, j]:g}")
    path.write_text("\n".join(lines) + "\n")


def read_soft_rows(path):
    lines = path.read_text().splitlines()
    rows = [ln.split(",") for ln in lines[1:]]
    return [(r[0], [float(x) for x in r[1:]]) for r in rows]


def test_synth_writes_bundle(tmp_path):
    out = tmp_path / "run"
    code = main(["synth", "--k", "2", "--a", "3", "--b", "3", "--latent", "clique3",
                 "--restarts", "2", "--out", str(out)])
    assert code == 0
    for name in ("soft_assignments.csv", "hard_assignments.csv", "b_matrix.txt",
                 "cut_report.json", "loss_trace.csv", "run_manifest.json",
                 "assignments_bar.svg"):
        assert (out / name).exists(), name
    manifest = json.loads((out / "run_manifest.json").read_text())
    assert manifest["command"] == "synth"
    assert manifest["seeds"] == [0, 1]
    assert manifest["config"]["reg_coefficient"] == 0.1
    assert "duration_seconds" in manifest and "version" in manifest
    trace = (out / "loss_trace.csv").read_text().splitlines()
    values = [float(ln.split(",")[1]) for ln in trace[1:]]
    assert all(b <= a for a, b in zip(values, values[1:]))


def test_soft_csv_rows_sum_to_one_as_written(tmp_path):
    out = tmp_path / "run"
    assert main(["synth", "--latent", "biclique2", "--restarts", "2",
                 "--out", str(out)]) == 0
    for _, probs in read_soft_rows(out / "soft_assignments.csv"):
        assert abs(sum(probs) - 1.0) <= 1e-9


def test_synth_latent_choices(tmp_path):
    out = tmp_path / "run"
    assert main(["synth", "--latent", "exact6", "--reg", "0", "--restarts", "2",
                 "--out", str(out)]) == 0
    manifest = json.loads((out / "run_manifest.json").read_text())
    assert manifest["latent_nodes"] == 6
    assert abs(manifest["data_term"] - math.log(600)) < 1e-3


def test_synth_rejects_unknown_latent(tmp_path, capsys):
    code = main(["synth", "--latent", "nope", "--out", str(tmp_path / "x")])
    assert code == 2
    assert "unknown latent graph" in capsys.readouterr().err


def test_latent_file_not_symmetric(tmp_path, capsys):
    w = tmp_path / "w.txt"
    w.write_text("2 2\n0 1\n0.5 0\n")
    code = main(["synth", "--latent", f"file:{w}", "--out", str(tmp_path / "x")])
    assert code == 2
    assert "latent graph not symmetric" in capsys.readouterr().err


def test_fit_matches_synth_pipeline(tmp_path):
    edge_list = tmp_path / "g.tsv"
    write_biclique_edge_list(edge_list)
    w_file = tmp_path / "w_clique.txt"
    save_matrix_text(w_file, diagonal_latent(3).weights)
    out_fit = tmp_path / "fit"
    out_synth = tmp_path / "synth"
    assert main(["fit", "--graph", str(edge_list), "--m", "3",
                 "--latent", f"file:{w_file}", "--seed", "1", "--restarts", "2",
                 "--out", str(out_fit)]) == 0
    assert main(["synth", "--latent", "clique3", "--seed", "1", "--restarts", "2",
                 "--out", str(out_synth)]) == 0
    assert (out_fit / "b_matrix.txt").read_bytes() == (out_synth / "b_matrix.txt").read_bytes()
    assert (out_fit / "loss_trace.csv").read_bytes() == (out_synth / "loss_trace.csv").read_bytes()


def test_fit_train_w_reaches_path_graph_entropy(tmp_path):
    edge_list = tmp_path / "path.tsv"
    edge_list.write_text("0\t1\t1\n")
    out = tmp_path / "run"
    # restarts carry past the symmetric near-uniform stationary point
    assert main(["fit", "--graph", str(edge_list), "--m", "2", "--train-w",
                 "--reg", "0", "--restarts", "20", "--out", str(out)]) == 0
    manifest = json.loads((out / "run_manifest.json").read_text())
    assert abs(manifest["data_term"] - math.log(2)) < 1e-2


def test_fit_rejects_m_zero(tmp_path, capsys):
    edge_list = tmp_path / "g.tsv"
    edge_list.write_text("0\t1\t1\n")
    code = main(["fit", "--graph", str(edge_list), "--m", "0", "--train-w",
                 "--out", str(tmp_path / "x")])
    assert code == 2


def test_fit_requires_latent_or_train_w(tmp_path):
    edge_list = tmp_path / "g.tsv"
    edge_list.write_text("0\t1\t1\n")
    assert main(["fit", "--graph", str(edge_list), "--m", "2",
                 "--out", str(tmp_path / "x")]) == 2
    w_file = tmp_path / "w.txt"
    save_matrix_text(w_file, diagonal_latent(2).weights)
    assert main(["fit", "--graph", str(edge_list), "--m", "2", "--train-w",
                 "--latent", f"file:{w_file}", "--out", str(tmp_path / "x")]) == 2


def test_fit_validates_latent_dims(tmp_path, capsys):
    edge_list = tmp_path / "g.tsv"
    edge_list.write_text("0\t1\t1\n")
    w_file = tmp_path / "w.txt"
    save_matrix_text(w_file, diagonal_latent(3).weights)
    code = main(["fit", "--graph", str(edge_list), "--m", "2",
                 "--latent", f"file:{w_file}", "--out", str(tmp_path / "x")])
    assert code == 2
    assert "does not match" in capsys.readouterr().err


def test_fit_emits_heatmap_for_m4(tmp_path):
    edge_list = tmp_path / "g.tsv"
    write_biclique_edge_list(edge_list, k=2, a=4, b=4)
    out = tmp_path / "run"
    assert main(["fit", "--graph", str(edge_list), "--m", "4", "--train-w",
                 "--restarts", "2", "--out", str(out)]) == 0
    assert (out / "assignments_heatmap.svg").exists()


def test_ortho_small_corpus(tmp_path):
    words = tmp_path / "words.txt"
    words.write_text("banana\ncabbage\nabba\n")
    out = tmp_path / "run"
    assert main(["ortho", "--words", str(words), "--latent", "bi",
                 "--restarts", "2", "--out", str(out)]) == 0
    assert (out / "assignments_bar.svg").exists()
    nodes = [name for name, _ in read_soft_rows(out / "soft_assignments.csv")]
    assert set(nodes) == set("abcneg")  # letters with adjacency mass survive


def test_phono_small_corpus(tmp_path):
    words = tmp_path / "words.txt"
    words.write_text("about\ncat\ntack\nact\nnoon\ntune\n")
    dict_file = tmp_path / "dict.txt"
    dict_file.write_text(DICT_FIXTURE)
    out = tmp_path / "run"
    assert main(["phono", "--words", str(words), "--dict", str(dict_file),
                 "--latent", "tri", "--restarts", "2", "--out", str(out)]) == 0
    assert (out / "assignments_ternary.svg").exists()
    manifest = json.loads((out / "run_manifest.json").read_text())
    assert set(manifest["input_digests"]) == {"words", "dict"}


def test_repeat_run_byte_identical(tmp_path):
    out = tmp_path / "run"
    argv = ["synth", "--latent", "biclique2", "--seed", "3", "--restarts", "2",
            "--out", str(out)]
    assert main(argv) == 0
    snapshot = {p.name: p.read_bytes() for p in out.iterdir()}
    assert main(argv) == 0
    for name, blob in snapshot.items():
        if name == "run_manifest.json":
            a, b = json.loads(blob), json.loads((out / name).read_text())
            a.pop("duration_seconds"), b.pop("duration_seconds")
            assert a == b
        else:
            assert blob == (out / name).read_bytes(), name
