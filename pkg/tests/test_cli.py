import csv
import io
import json
import subprocess
import sys

import pydot
import pytest

from tvariant import cli, verify
from tvariant.transform import Transformation
from tvariant.variant import VariantContext


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_info_text():
    code, out, _ = run("info", "--n", "4", "--theta", "1233")
    assert code == 0
    assert "|Reg| = 100 of 256" in out and "rank 2: 6 x 5, |H| = 2" in out


def test_info_json_roundtrip():
    code, out, _ = run("info", "--n", "4", "--theta", "1233", "--format", "json")
    js = json.loads(out)
    assert code == 0 and js["reg_count"] == 100 and len(js["objects"]["pTheta"]) == 11
    assert json.loads(json.dumps(js)) == js


@pytest.mark.parametrize("argv", [
    ("info", "--n", "4", "--theta", "1233"),
    ("eggbox", "--n", "4", "--theta", "1233", "--format", "dot"),
    ("verify", "--n", "3", "--theta", "122", "--format", "json"),
    ("sweep", "--n", "3"),
    ("crossconn", "--n", "3", "--theta", "122", "--format", "json"),
])
def test_deterministic(argv):
    assert run(*argv) == run(*argv)


def test_eggbox_rank2_text():
    code, out, _ = run("eggbox", "--n", "4", "--theta", "1233", "--rank", "2")
    assert code == 0 and out.startswith("rank 2: 6 x 5, |H| = 2")
    row = next(line for line in out.splitlines() if line.startswith("{124|3}"))
    assert "(1121) (2212)" in row


def test_eggbox_json():
    code, out, _ = run("eggbox", "--n", "4", "--theta", "1233", "--rank", "2", "--format", "json")
    js = json.loads(out)
    box = js["d_classes"][0]
    assert len(box["rows"]) == 6 and len(box["cols"]) == 5
    i, j = box["rows"].index("{124|3}"), box["cols"].index("{12}")
    assert box["cells"][i][j] == ["1121", "2212"]


def test_eggbox_rank1():
    code, out, _ = run("eggbox", "--n", "4", "--theta", "1233", "--rank", "1", "--format", "json")
    js = json.loads(out)
    box = js["d_classes"][0]
    assert (len(box["rows"]), len(box["cols"])) == (1, 4)


def test_eggbox_permutation_is_plain():
    _, a, _ = run("eggbox", "--n", "3", "--theta", "123", "--format", "json")
    js = json.loads(a)
    boxes = js["d_classes"]
    assert sum(len(c) for b in boxes for row in b["cells"] for c in row) == 27


def test_eggbox_dot_parses():
    code, out, _ = run("eggbox", "--n", "4", "--theta", "1233", "--format", "dot")
    assert code == 0
    graphs = pydot.graph_from_dot_data(out)
    assert graphs and len(graphs) == 1
    g = graphs[0]
    clusters = g.get_subgraphs()
    assert sorted(c.get_name() for c in clusters) == ["cluster_rank1", "cluster_rank2", "cluster_rank3"]
    nodes = [n for c in clusters for n in c.get_nodes() if n.get_name().startswith("r")]
    assert len(nodes) == 4 + 30 + 6
    filled = [n for n in nodes if n.get("fillcolor")]
    assert filled and all(n.get("style") == "filled" for n in filled)


def test_eggbox_bad_rank():
    code, _, err = run("eggbox", "--n", "4", "--theta", "1233", "--rank", "4")
    assert code == 2 and "rank 4" in err


def test_format_not_supported():
    code, _, err = run("info", "--n", "3", "--theta", "122", "--format", "dot")
    assert code == 2 and "does not support" in err


def test_exit_codes():
    assert run("info", "--n", "3", "--theta", "12")[0] == 2           # parse error
    assert run("info", "--n", "3")[0] == 2                             # missing theta
    assert run("bogus", "--n", "3")[0] == 2
    assert run("info", "--n", "0", "--theta", "1")[0] == 2
    assert run("reg", "--n", "6", "--theta", "123456")[0] == 3          # guard
    assert run("reg", "--n", "6", "--theta", "123456", "--max-n", "6")[0] == 0
    assert run("verify", "--n", "3", "--theta", "111")[0] == 1          # honest failure
    assert run("cones", "--n", "4", "--theta", "1233", "--word", "3434")[0] == 2  # vertex not an object


def test_verify_passes_122():
    code, out, _ = run("verify", "--n", "3", "--theta", "122")
    assert code == 0 and out.rstrip().endswith("ALL PASS")


def test_verify_json_schema():
    code, out, _ = run("verify", "--n", "3", "--theta", "111", "--format", "json")
    js = json.loads(out)
    assert code == 1 and js["ok"] is False
    failed = [p for p in js["properties"] if p["status"] == "fail"]
    assert [p["name"] for p in failed] == ["partition_cones"]
    assert failed[0]["witness"] is not None
    assert all(set(p) == {"name", "status", "detail", "witness"} for p in js["properties"])


def test_verify_only():
    code, out, _ = run("verify", "--n", "3", "--theta", "122", "--only", "reg_oracle", "green")
    assert code == 0 and out.count("PASS ") == 2


def test_corrupted_product_negative_control():
    ctx = VariantContext.from_word("122", 3)
    bad_elem = Transformation((1, 1, 1))

    def corrupted(a, b):
        return a if b == bad_elem else ctx.product(a, b)

    rep = verify.run_battery(ctx, only=["product"], product=corrupted)
    assert not rep.ok
    r = rep.results[0]
    assert r.status == "fail" and len(r.witness) == 3


def test_non_closed_product_negative_control():
    ctx = VariantContext.from_word("122", 3)
    # every product lands on 323, which is not regular under theta = 122
    r = verify.check_product(ctx, product=lambda a, b: Transformation((3, 2, 3)))
    assert r.status == "fail" and len(r.witness) == 3


def test_sweep_n3():
    code, out, _ = run("sweep", "--n", "3")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 27
    assert {r["theta"] for r in rows if r["all_regular"] == "True"} == {"123", "132", "213", "231", "312", "321"}
    assert all(r["all_regular"] == r["permutation"] for r in rows)


def test_sweep_n2_and_json():
    code, out, _ = run("sweep", "--n", "2", "--format", "json")
    assert code == 0 and len(json.loads(out)["rows"]) == 4


def test_sweep_row_1233():
    row = next(r for r in cli.sweep_rows(4) if r["theta"] == "1233")
    assert row["reg_count"] == 100 and row["shapes"] == "1:1x4;2:6x5;3:3x2"


def test_reg_green_biorder_sandwich_commands():
    code, out, _ = run("reg", "--n", "3", "--theta", "122", "--format", "json")
    assert code == 0 and json.loads(out)["count"] == 11
    code, out, _ = run("green", "--n", "4", "--theta", "1233")
    assert code == 0 and "3 D-classes" in out
    code, out, _ = run("biorder", "--n", "3", "--flavor", "plain")
    assert code == 0 and out.startswith("10 plain idempotents")
    code, out, _ = run("sandwich", "--n", "3", "--A", "{12}", "--pi", "{13|2}", "--flavor", "plain",
                       "--format", "json")
    words = [m["word"] for m in json.loads(out)["members"]]
    assert code == 0 and "323" in words
    code, out, _ = run("sandwich", "--n", "3", "--theta", "122", "--A", "{12}", "--pi", "{13|2}",
                       "--format", "json")
    assert code == 0 and "323" not in [m["word"] for m in json.loads(out)["members"]]
    assert run("sandwich", "--n", "3", "--A", "{12}")[0] == 2


def test_cones_and_crossconn_commands():
    code, out, _ = run("cones", "--n", "4", "--theta", "1233", "--format", "json")
    js = json.loads(out)
    assert code == 0 and (js["pool"], js["normal"]) == (146, 134)
    code, out, _ = run("cones", "--n", "4", "--theta", "1233", "--word", "1123", "--format", "json")
    js = json.loads(out)
    assert code == 0 and js["normal"] is False and js["violations"][0][0] == "isomorphism"
    code, out, _ = run("crossconn", "--n", "4", "--theta", "1233")
    assert code == 0 and out.startswith("100 linked pairs")
    code, out, _ = run("crossconn", "--n", "4", "--theta", "1233", "--A", "{12}", "--pi", "{12|34}",
                       "--format", "json")
    js = json.loads(out)
    assert code == 0 and js["bijective"] and sorted(js["delta"]) == ["1111", "1122", "2211", "2222"]
    assert run("crossconn", "--n", "4", "--theta", "1233", "--A", "{12}")[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "tvariant", "info", "--n", "3", "--theta", "122"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "|Reg| = 11" in proc.stdout


def test_eggbox_text_overlay_markers():
    _, out, _ = run("eggbox", "--n", "4", "--theta", "1233", "--rank", "2")
    header = out.splitlines()[1]
    assert [c.strip() for c in header.split(" | ")[1:]] == ["D {12}", "D {13}", "{14}", "D {23}", "{24}"]
    marked = {line.split(" | ")[0].strip() for line in out.splitlines() if line.startswith("G ")}
    assert marked == {"G {1|234}", "G {12|34}", "G {134|2}"}


def test_verify_1233_all_pass():
    code, out, _ = run("verify", "--n", "4", "--theta", "1233", "--format", "json")
    js = json.loads(out)
    assert code == 0 and js["ok"]
    linked = next(p for p in js["properties"] if p["name"] == "linked_pairs")
    assert linked["detail"].startswith("100 linked pairs")
