import hashlib
import json
import subprocess
import sys

import numpy as np
import pytest
from PIL import Image

from augscope import ImageRecord, Manifest, read_feature_store, read_manifest, write_manifest
from augscope.cli import main
from augscope.report import parse_stats_csv


def make_dataset(tmp_path, count=8, size=16, seed=0):
    rng = np.random.default_rng(seed)
    records = []
    for i in range(count):
        path = tmp_path / f"img{i}.png"
        Image.fromarray(rng.integers(0, 256, size=(size, size), dtype=np.uint8), mode="L").save(path)
        records.append(ImageRecord(
            id=f"img{i}", path=str(path), label="blood" if i % 2 == 0 else "no_blood"))
    manifest = Manifest(records)
    manifest_path = tmp_path / "real.jsonl"
    write_manifest(manifest, manifest_path)
    return manifest_path


@pytest.fixture
def dataset(tmp_path):
    return make_dataset(tmp_path)


def run(argv):
    return main([str(a) for a in argv])


class TestAugmentCommand:
    def test_happy_path(self, dataset, tmp_path):
        out_dir = tmp_path / "flipped"
        assert run(["augment", "--in", dataset, "--technique", "hflip", "--out", out_dir]) == 0
        out = read_manifest(out_dir / "manifest.jsonl")
        assert len(out) == 8
        assert all(rec.source == "aug_hflip" for rec in out)
        assert len(list(out_dir.glob("*.png"))) == 8

    def test_idempotent_bytes(self, dataset, tmp_path):
        for name in ("a", "b"):
            run(["augment", "--in", dataset, "--technique", "contrast", "--factor", "2.0",
                 "--out", tmp_path / name])
        digests = []
        for name in ("a", "b"):
            blob = b"".join(sorted(p.read_bytes() for p in (tmp_path / name).glob("*.png")))
            digests.append(hashlib.sha256(blob).hexdigest())
        assert digests[0] == digests[1]

    def test_missing_image_exits_one(self, tmp_path, capsys):
        manifest_path = tmp_path / "bad.jsonl"
        write_manifest(Manifest([ImageRecord(id="x", path=str(tmp_path / "gone.png"),
                                             label="blood")]), manifest_path)
        assert run(["augment", "--in", manifest_path, "--technique", "hflip",
                    "--out", tmp_path / "o"]) == 1
        err = capsys.readouterr().err
        assert err.startswith("error: MissingFile:")
        assert "\n" not in err.strip()


class TestExtractCommand:
    def test_reference_backend(self, dataset, tmp_path):
        out = tmp_path / "feats.augf"
        assert run(["extract", "--in", dataset, "--backend", "reference", "--out", out]) == 0
        store = read_feature_store(out)
        assert len(store) == 8
        assert store.labels["img0"] == "blood"

    def test_deterministic_output(self, dataset, tmp_path):
        run(["extract", "--in", dataset, "--out", tmp_path / "a.augf"])
        run(["extract", "--in", dataset, "--out", tmp_path / "b.augf"])
        assert (tmp_path / "a.augf").read_bytes() == (tmp_path / "b.augf").read_bytes()


class TestCompareCommand:
    @pytest.fixture
    def stores(self, dataset, tmp_path):
        aug_dir = tmp_path / "aug"
        run(["augment", "--in", dataset, "--technique", "hflip", "--out", aug_dir])
        run(["extract", "--in", dataset, "--out", tmp_path / "real.augf"])
        run(["extract", "--in", aug_dir / "manifest.jsonl", "--out", tmp_path / "aug.augf"])
        return tmp_path / "real.augf", tmp_path / "aug.augf"

    def test_cross_mode_writes_stats_and_hist(self, stores, tmp_path):
        a, b = stores
        stats_path, hist_path = tmp_path / "s.csv", tmp_path / "h.json"
        code = run(["compare", "--a", a, "--b", b, "--mode", "cross", "--bins", "4",
                    "--name", "real_vs_hflip", "--stats", stats_path, "--hist", hist_path])
        assert code == 0
        rows = parse_stats_csv(stats_path)
        assert [r.class_ for r in rows] == ["blood", "no_blood", "pooled"]
        assert all(r.comparison == "cross" and r.name == "real_vs_hflip" for r in rows)
        pooled = rows[-1]
        assert pooled.sample_size == 4 * 4 + 4 * 4
        payload = json.loads(hist_path.read_text())
        assert payload["comparison"] == "real_vs_hflip"
        assert len(payload["bins"]) == 4

    def test_within_mode(self, stores, tmp_path):
        a, _ = stores
        stats_path = tmp_path / "w.csv"
        assert run(["compare", "--a", a, "--mode", "within", "--stats", stats_path]) == 0
        pooled = [r for r in parse_stats_csv(stats_path) if r.class_ == "pooled"][0]
        assert pooled.sample_size == 2 * 6  # 2 * C(4,2)

    def test_within_rejects_b_as_usage_error(self, stores, tmp_path, capsys):
        a, b = stores
        with pytest.raises(SystemExit) as excinfo:
            run(["compare", "--a", a, "--b", b, "--mode", "within",
                 "--stats", tmp_path / "x.csv"])
        assert excinfo.value.code == 2
        assert "drop --b" in capsys.readouterr().err

    def test_idempotent(self, stores, tmp_path):
        a, b = stores
        for name in ("1", "2"):
            run(["compare", "--a", a, "--b", b, "--mode", "cross",
                 "--stats", tmp_path / f"s{name}.csv", "--hist", tmp_path / f"h{name}.json"])
        assert (tmp_path / "s1.csv").read_bytes() == (tmp_path / "s2.csv").read_bytes()
        assert (tmp_path / "h1.json").read_bytes() == (tmp_path / "h2.json").read_bytes()


class TestPlanCommand:
    def plan_inputs(self, tmp_path, count=40):
        real = make_dataset(tmp_path, count=count, seed=1)
        pool = Manifest([
            ImageRecord(id=f"{rec.id}_hflip", path=rec.path, label=rec.label,
                        source="aug_hflip", origin_id=rec.id)
            for rec in read_manifest(real)
        ])
        pool_path = tmp_path / "pool.jsonl"
        write_manifest(pool, pool_path)
        return real, pool_path

    def test_plan_writes_schedule(self, tmp_path):
        real, pool = self.plan_inputs(tmp_path)
        out = tmp_path / "plan"
        code = run(["plan", "--real", real, "--pool", pool, "--train-count", "20",
                    "--test-count", "10", "--proportions", "10,25", "--seed", "9", "--out", out])
        assert code == 0
        descriptor = json.loads((out / "plan.json").read_text())
        assert descriptor["seed"] == 9
        assert sorted(descriptor["manifests"]) == ["test.jsonl", "train_p10.jsonl", "train_p25.jsonl"]

    def test_plan_deterministic_across_runs(self, tmp_path):
        real, pool = self.plan_inputs(tmp_path)
        for name in ("a", "b"):
            run(["plan", "--real", real, "--pool", pool, "--train-count", "20",
                 "--test-count", "10", "--proportions", "10,25,50", "--seed", "4",
                 "--out", tmp_path / name])
        for f in ("plan.json", "test.jsonl", "train_p10.jsonl", "train_p50.jsonl"):
            assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()

    def test_env_seed_overrides(self, tmp_path, monkeypatch):
        real, pool = self.plan_inputs(tmp_path)
        monkeypatch.setenv("AUGSCOPE_SEED", "777")
        run(["plan", "--real", real, "--pool", pool, "--train-count", "20",
             "--test-count", "10", "--proportions", "10", "--seed", "1", "--out", tmp_path / "env"])
        descriptor = json.loads((tmp_path / "env" / "plan.json").read_text())
        assert descriptor["seed"] == 777

    def test_pool_exhausted_exit_code(self, tmp_path, capsys):
        real, _ = self.plan_inputs(tmp_path)
        tiny_pool = tmp_path / "tiny.jsonl"
        pool = read_manifest(tmp_path / "pool.jsonl")
        write_manifest(Manifest(list(pool)[:3]), tiny_pool)
        code = run(["plan", "--real", real, "--pool", tiny_pool, "--train-count", "20",
                    "--test-count", "10", "--proportions", "75", "--seed", "1",
                    "--out", tmp_path / "fail"])
        assert code == 1
        err = capsys.readouterr().err
        assert "PoolExhausted" in err and "short" in err

    def test_mixed_test_mode(self, tmp_path):
        real, _ = self.plan_inputs(tmp_path, count=40)
        syn = Manifest([
            ImageRecord(id=f"syn{i}", path="/unused.png", label="blood" if i % 2 == 0 else "no_blood",
                        source="syn_b2")
            for i in range(30)
        ])
        syn_path = tmp_path / "syn.jsonl"
        write_manifest(syn, syn_path)
        out = tmp_path / "mixed"
        code = run(["plan", "--real", real, "--pool", syn_path, "--train-count", "20",
                    "--test-count", "10", "--proportions", "10,25", "--test-mode", "mixed:5,5",
                    "--seed", "2", "--out", out])
        assert code == 0
        test = read_manifest(out / "test.jsonl")
        assert len(test) == 10
        assert sum(1 for r in test if r.source == "real") == 5


class TestReportCommand:
    def test_matches_reference_rows(self, tmp_path, capsys):
        stats_path = tmp_path / "stats.csv"
        stats_path.write_text(
            "comparison,name,class,sample_size,mean,sd,skewness\n"
            "cross,real_vs_syn,pooled,12800,0.474,0.0906,0.4268\n")
        assert run(["report", "--stats", stats_path, "--reference", "table2"]) == 0
        out = capsys.readouterr().out
        assert "real_vs_syn,mean," in out
        assert ",pass" in out

    def test_failing_field_reported(self, tmp_path, capsys):
        stats_path = tmp_path / "stats.csv"
        stats_path.write_text(
            "comparison,name,class,sample_size,mean,sd,skewness\n"
            "cross,real_vs_syn,pooled,12800,0.60,0.0906,0.4268\n")
        run(["report", "--stats", stats_path, "--reference", "table2"])
        out = capsys.readouterr().out
        assert any(",fail" in line and "mean" in line for line in out.splitlines())

    def test_no_matching_rows(self, tmp_path, capsys):
        stats_path = tmp_path / "stats.csv"
        stats_path.write_text(
            "comparison,name,class,sample_size,mean,sd,skewness\n"
            "cross,mystery,pooled,10,0.5,0.1,0.0\n")
        assert run(["report", "--stats", stats_path, "--reference", "table2"]) == 1
        assert "UnknownComparison" in capsys.readouterr().err


class TestUsageErrors:
    def test_unknown_flag_exits_two(self):
        with pytest.raises(SystemExit) as excinfo:
            main(["compare", "--bogus"])
        assert excinfo.value.code == 2

    def test_no_subcommand_exits_two(self):
        with pytest.raises(SystemExit) as excinfo:
            main([])
        assert excinfo.value.code == 2

    def test_module_entry_point(self, tmp_path):
        result = subprocess.run([sys.executable, "-m", "augscope.cli", "--help"],
                                capture_output=True, text=True)
        assert result.returncode == 0
        assert "augment" in result.stdout and "plan" in result.stdout
