import json
import subprocess
import sys
from pathlib import Path

import pytest

from satotate import symfunc
from satotate.cli import CacheError, cache_roundtrip, load_cache, run, save_cache
from satotate.symfunc import QPolynomial

sys.path.insert(0, str(Path(__file__).parent))
from golden_cases import CASES  # noqa: E402

GOLDEN = Path(__file__).parent / "golden"


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden_output(name):
    argv = CASES[name]
    ext = "csv" if "csv" in argv else "json"
    code, text = run(argv)
    assert text == (GOLDEN / f"{name}.{ext}").read_text()
    expected = 2 if name.startswith("invalid") else 3 if name.startswith("refused") else 0
    assert code == expected


def test_output_is_byte_identical_across_runs():
    argv = CASES["moment_210_p2"]
    assert run(argv) == run(argv)


def test_timing_is_opt_in():
    _, text = run(["degree", "--xi", "1,0", "--prime", "2", "--timing"])
    assert "seconds" in json.loads(text)


def test_exact_values_documents():
    doc = json.loads(run(CASES["gamma_n3_p2"])[1])
    assert doc["outputs"]["gamma"] == {"num": 3, "den": 4, "exact": True}
    doc = json.loads(run(CASES["degree_210_p3"])[1])
    assert doc["outputs"]["degree"]["num"] == 13 * 4 * 3


def test_argument_errors_exit_2():
    code, text = run(["gamma", "--n", "3", "--m", "2"])
    assert code == 2 and json.loads(text)["status"] == "invalid"
    code, _ = run(["no-such-command"])
    assert code == 2
    code, _ = run(["degree", "--n", "3", "--xi", "1,0", "--prime", "2"])
    assert code == 2


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "satotate", "degree", "--xi", "1,0", "--prime", "5"],
                         capture_output=True, text=True, check=False)
    assert out.returncode == 0
    assert json.loads(out.stdout)["outputs"]["degree"]["num"] == 6


def test_cache_roundtrip(tmp_path):
    table = {((2, 1), (1, 1, 1)): QPolynomial((0, 1, 1)), ((3,), (3,)): QPolynomial((1,))}
    assert cache_roundtrip(tmp_path / "kf.json", table) == table


def test_cache_rejects_truncation_and_tampering(tmp_path):
    path = tmp_path / "kf.json"
    save_cache(path, {((2, 1), (1, 1, 1)): QPolynomial((0, 1, 1))})
    text = path.read_text()
    path.write_text(text[: len(text) // 2])
    with pytest.raises(CacheError):
        load_cache(path)
    doc = json.loads(text)
    doc["entries"]["2,1|1,1,1"] = [0, 1, 2]
    path.write_text(json.dumps(doc))
    with pytest.raises(CacheError):
        load_cache(path)
    doc = json.loads(text)
    doc["version"] = 99
    path.write_text(json.dumps(doc))
    with pytest.raises(CacheError):
        load_cache(path)


def test_cli_cache_flag(tmp_path):
    path = tmp_path / "kf.json"
    code, _ = run(["moment", "--nu", "2,1,0", "--prime", "2", "--routes", "kato", "--cache", str(path)])
    assert code == 0
    stored = load_cache(path)
    assert stored[((2, 1), (1, 1, 1))] == QPolynomial((0, 1, 1))
    saved = dict(symfunc.KOSTKA_FOULKES_TABLE)
    try:
        symfunc.KOSTKA_FOULKES_TABLE.clear()
        code, text = run(["moment", "--nu", "2,1,0", "--prime", "2", "--routes", "kato", "--cache", str(path)])
        assert code == 0 and ((2, 1), (1, 1, 1)) in symfunc.KOSTKA_FOULKES_TABLE
    finally:
        symfunc.KOSTKA_FOULKES_TABLE.update(saved)
    path.write_text("{")
    code, text = run(["moment", "--nu", "2,1,0", "--prime", "2", "--cache", str(path)])
    assert code == 3 and json.loads(text)["reason"] == "CacheError"
