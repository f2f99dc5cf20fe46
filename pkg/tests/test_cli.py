import hashlib
import json
import os
import subprocess
import sys

import pytest
from PIL import Image

from gene_atlas import cli, explore, store
from gene_atlas.annotation import draft_to_document
from gene_atlas.explore import PageRequest
from gene_atlas.vocab import GeneTag

from test_annotation import make_draft
from gene_atlas.vocab import MaterialClass


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


@pytest.fixture(scope="module")
def seeded_dir(tmp_path_factory):
    data_dir = str(tmp_path_factory.mktemp("cli-corpus"))
    assert cli.main(["seed-corpus", "--data-dir", data_dir, "--n", "60", "--seed", "7"]) == 0
    return data_dir


def corpus_hash(data_dir):
    with open(os.path.join(data_dir, store.CORPUS_FILE), "rb") as handle:
        return hashlib.sha256(handle.read()).hexdigest()


def test_seed_corpus_is_byte_stable(tmp_path, capsys):
    a, b = str(tmp_path / "a"), str(tmp_path / "b")
    code_a, out_a = run_cli(capsys, "seed-corpus", "--data-dir", a, "--n", "100", "--seed", "7")
    code_b, out_b = run_cli(capsys, "seed-corpus", "--data-dir", b, "--n", "100", "--seed", "7")
    assert code_a == code_b == 0
    assert out_a["corpus_sha256"] == out_b["corpus_sha256"]
    assert corpus_hash(a) == corpus_hash(b) == out_a["corpus_sha256"]


def test_seed_corpus_differs_across_seeds(tmp_path, capsys):
    a, b = str(tmp_path / "a"), str(tmp_path / "b")
    _, out_a = run_cli(capsys, "seed-corpus", "--data-dir", a, "--n", "100", "--seed", "7")
    _, out_b = run_cli(capsys, "seed-corpus", "--data-dir", b, "--n", "100", "--seed", "8")
    assert out_a["corpus_sha256"] != out_b["corpus_sha256"]


def test_seed_corpus_via_subprocess(tmp_path):
    data_dir = str(tmp_path / "sub")
    proc = subprocess.run(
        [sys.executable, "-m", "gene_atlas.cli", "seed-corpus", "--data-dir", data_dir,
         "--n", "20", "--seed", "3"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    doc = json.loads(proc.stdout)
    assert doc["generated"] == 20
    assert os.path.exists(doc["path"])


def test_colors_command_on_uniform_blue(tmp_path, capsys):
    path = str(tmp_path / "blue.png")
    Image.new("RGB", (32, 32), (0, 0, 255)).save(path)
    code, doc = run_cli(capsys, "colors", "--image", path, "--k", "5", "--seed", "0")
    assert code == 0
    assert doc["dominant_hex"] == "#0000FF"
    assert doc["perceptual_class"] == "Cool"


def test_colors_command_rejects_non_image(tmp_path, capsys):
    path = str(tmp_path / "nope.txt")
    open(path, "w").write("text")
    code, doc = run_cli(capsys, "colors", "--image", path)
    assert code == 1
    assert doc["code"] == "image_decode"


def test_browse_matches_module(seeded_dir, capsys):
    code, doc = run_cli(
        capsys, "browse", "--data-dir", seeded_dir, "--tag", "Form:Hat", "--page-size", "100"
    )
    assert code == 0
    with store.CollectionStore(seeded_dir) as st:
        index = explore.build_index(list(st.records.values()))
    expected = explore.browse_by_tag(index, GeneTag.parse("Form:Hat"), PageRequest(1, 100))
    assert doc == {"total": expected.total, "ids": list(expected.ids)}


def test_search_matches_module(seeded_dir, capsys):
    code, doc = run_cli(capsys, "search", "--data-dir", seeded_dir, "--q", "silk")
    assert code == 0
    with store.CollectionStore(seeded_dir) as st:
        index = explore.build_index(list(st.records.values()))
    expected = explore.search_keyword(index, "silk", PageRequest(1, 20))
    assert doc["total"] == expected.total
    assert doc["hits"] == [
        {"costume_id": h.costume_id, "score": h.score} for h in expected.hits
    ]


def test_browse_unknown_tag_is_operational_error(seeded_dir, capsys):
    code, doc = run_cli(capsys, "browse", "--data-dir", seeded_dir, "--tag", "Form:Cape")
    assert code == 1
    assert doc["code"] == "unknown_name"


def test_generate_command(seeded_dir, capsys):
    with store.CollectionStore(seeded_dir) as st:
        target = next(
            r for r in st.records.values()
            if any(m.dimension.value == "FestiveCeremonies" for m in r.middle)
        )
    code, doc = run_cli(
        capsys,
        "generate", "--data-dir", seeded_dir, "--costume", target.id,
        "--theme", "festive", "--concept", "Harmony", "--seed", "42",
    )
    assert code == 0
    assert doc["scaffold_report"]["passed"] is True
    assert doc["artifact"]["provider_id"] == "mock"
    assert target.title in doc["artifact"]["story"]


def test_usage_error_exits_2(capsys):
    with pytest.raises(SystemExit) as excinfo:
        cli.main(["browse", "--data-dir", "somewhere"])  # --tag missing
    assert excinfo.value.code == 2


# -- ingest flow ---------------------------------------------------------------


def write_ingest_inputs(tmp_path, costume_id="c-900"):
    draft_a = make_draft("coder-a", costume_id=costume_id)
    draft_b = make_draft(
        "coder-b",
        costume_id=costume_id,
        materials=(MaterialClass.Silk, MaterialClass.Metal),
    )
    meta = {"id": costume_id, "title": "test jacket", "ethnic_group": "Miao", "region": None}
    paths = {}
    for name, doc in (
        ("meta", meta),
        ("a", draft_to_document(draft_a)),
        ("b", draft_to_document(draft_b)),
    ):
        path = tmp_path / f"{name}.json"
        path.write_text(json.dumps(doc), encoding="utf-8")
        paths[name] = str(path)
    text = tmp_path / "source.txt"
    text.write_text("Official description of the test jacket.", encoding="utf-8")
    paths["text"] = str(text)
    return paths


def test_ingest_with_undecided_conflict_exits_1(tmp_path, capsys):
    paths = write_ingest_inputs(tmp_path)
    data_dir = str(tmp_path / "data")
    code, doc = run_cli(
        capsys,
        "ingest", "--data-dir", data_dir, "--meta", paths["meta"],
        "--text", paths["text"], "--draft-a", paths["a"], "--draft-b", paths["b"],
    )
    assert code == 1
    assert doc["error"]["code"] == "missing_decision"
    assert [c["field_path"] for c in doc["report"]["conflicts"]] == [
        "surface.materials.Metal"
    ]


def test_ingest_with_decisions_persists_record(tmp_path, capsys):
    paths = write_ingest_inputs(tmp_path)
    decisions = tmp_path / "decisions.json"
    decisions.write_text(json.dumps({"surface.materials.Metal": "B"}), encoding="utf-8")
    data_dir = str(tmp_path / "data")
    code, doc = run_cli(
        capsys,
        "ingest", "--data-dir", data_dir, "--meta", paths["meta"],
        "--text", paths["text"], "--draft-a", paths["a"], "--draft-b", paths["b"],
        "--decisions", str(decisions),
    )
    assert code == 0
    assert doc["record"]["id"] == "c-900"
    assert doc["record"]["surface"]["materials"] == ["Silk", "Metal"]
    with store.CollectionStore(data_dir) as st:
        assert "c-900" in st.records

    # same id again -> duplicate
    code, doc = run_cli(
        capsys,
        "ingest", "--data-dir", data_dir, "--meta", paths["meta"],
        "--text", paths["text"], "--draft-a", paths["a"], "--draft-b", paths["b"],
        "--decisions", str(decisions),
    )
    assert code == 1
    assert doc["code"] == "duplicate_id"


def test_ingest_with_image_extracts_profile(tmp_path, capsys):
    paths = write_ingest_inputs(tmp_path, costume_id="c-901")
    decisions = tmp_path / "decisions.json"
    decisions.write_text(json.dumps({"surface.materials.Metal": "A"}), encoding="utf-8")
    image_path = str(tmp_path / "blue.png")
    Image.new("RGB", (16, 16), (0, 0, 255)).save(image_path)
    data_dir = str(tmp_path / "data")
    code, doc = run_cli(
        capsys,
        "ingest", "--data-dir", data_dir, "--meta", paths["meta"],
        "--text", paths["text"], "--draft-a", paths["a"], "--draft-b", paths["b"],
        "--decisions", str(decisions), "--image", image_path,
    )
    assert code == 0
    profile = doc["record"]["surface"]["color_profile"]
    assert profile["dominant_hex"] == "#0000FF"
    assert profile["perceptual_class"] == "Cool"
