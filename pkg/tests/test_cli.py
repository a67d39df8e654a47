import json

import pytest

from purb.cli import main
from purb.suites import read_public_key, read_secret_key


def run(*args):
    return main([str(a) for a in args])


@pytest.fixture
def keyfiles(tmp_path):
    root = str(tmp_path / "alice")
    assert run("keygen", "--suite", "B", "--out", root, "--seed", "aa") == 0
    return root + ".sk", root + ".pk"


class TestKeygen:
    def test_suite_b_lengths(self, tmp_path, capsys):
        prefix = str(tmp_path / "k")
        assert run("keygen", "--suite", "B", "--out", prefix) == 0
        assert len(read_secret_key(prefix + ".sk")) == 32
        assert len(read_public_key(prefix + ".pk")) == 32
        assert "B" in capsys.readouterr().out

    def test_suite_a_lengths(self, tmp_path):
        prefix = str(tmp_path / "k")
        assert run("keygen", "--suite", "A", "--out", prefix) == 0
        assert len(read_public_key(prefix + ".pk")) == 64

    def test_missing_suite_usage_error(self, tmp_path):
        with pytest.raises(SystemExit) as info:
            run("keygen", "--out", str(tmp_path / "k"))
        assert info.value.code == 2

    def test_unknown_suite_usage_error(self, tmp_path):
        with pytest.raises(SystemExit) as info:
            run("keygen", "--suite", "Z", "--out", str(tmp_path / "k"))
        assert info.value.code == 2

    def test_unwritable_path(self, tmp_path, capsys):
        assert run("keygen", "--suite", "B", "--out", str(tmp_path / "no" / "k")) == 2


class TestEncodeDecode:
    def write_recipients(self, tmp_path, pk_path):
        rcpt = tmp_path / "rcpt.json"
        rcpt.write_text(
            json.dumps(
                [
                    {"suite": "B", "pubkey": open(pk_path).read().strip()},
                    {"suite": "pw", "passphrase": "tote-bag"},
                ]
            )
        )
        return str(rcpt)

    def test_roundtrip(self, tmp_path, keyfiles, capsys):
        sk_path, pk_path = keyfiles
        rcpt = self.write_recipients(tmp_path, pk_path)
        msg = tmp_path / "msg.bin"
        msg.write_bytes(b"\x01\x02" * 700)
        blob = tmp_path / "msg.purb"
        assert run("encode", "--to", rcpt, "--in", msg, "--out", blob) == 0
        out = capsys.readouterr().out
        assert "bytes total" in out and "compactness" in out

        dec = tmp_path / "dec.bin"
        assert run(
            "decode", "--key", sk_path, "--suite", "B", "--in", blob, "--out", dec,
            "--stats",
        ) == 0
        assert dec.read_bytes() == msg.read_bytes()
        assert "exp_count=1" in capsys.readouterr().out

        dec2 = tmp_path / "dec2.bin"
        assert run(
            "decode", "--passphrase", "tote-bag", "--in", blob, "--out", dec2
        ) == 0
        assert dec2.read_bytes() == msg.read_bytes()

    def test_wrong_key_uniform_failure(self, tmp_path, keyfiles, capsys):
        sk_path, pk_path = keyfiles
        rcpt = self.write_recipients(tmp_path, pk_path)
        msg = tmp_path / "m"
        msg.write_bytes(b"hello")
        blob = tmp_path / "m.purb"
        assert run("encode", "--to", rcpt, "--in", msg, "--out", blob) == 0
        capsys.readouterr()

        evil = str(tmp_path / "evil")
        assert run("keygen", "--suite", "B", "--out", evil, "--seed", "bb") == 0
        capsys.readouterr()
        code = run(
            "decode", "--key", evil + ".sk", "--suite", "B",
            "--in", blob, "--out", tmp_path / "nope",
        )
        assert code == 1
        assert capsys.readouterr().out.strip() == "decode failed"

    def test_pad_none_length(self, tmp_path, keyfiles, capsys):
        sk_path, pk_path = keyfiles
        rcpt = tmp_path / "r.json"
        rcpt.write_text(json.dumps([{"suite": "B", "pubkey": open(pk_path).read().strip()}]))
        msg = tmp_path / "m"
        payload = b"\x00" * 1000  # large enough that the tag clears all key positions
        msg.write_bytes(payload)
        blob = tmp_path / "m.purb"
        assert run("encode", "--to", rcpt, "--in", msg, "--out", blob, "--pad", "none") == 0
        header = 96
        assert blob.stat().st_size == header + len(payload) + 32

    def test_dummy_recipients(self, tmp_path, keyfiles, capsys):
        sk_path, pk_path = keyfiles
        rcpt = tmp_path / "r.json"
        rcpt.write_text(json.dumps([{"suite": "B", "pubkey": open(pk_path).read().strip()}]))
        msg = tmp_path / "m"
        msg.write_bytes(b"covered")
        blob = tmp_path / "m.purb"
        assert run(
            "encode", "--to", rcpt, "--in", msg, "--out", blob, "--dummy", "3",
            "--seed", "cc",
        ) == 0
        dec = tmp_path / "d"
        assert run("decode", "--key", sk_path, "--suite", "B", "--in", blob, "--out", dec) == 0
        assert dec.read_bytes() == b"covered"

    def test_seed_determinism(self, tmp_path, keyfiles):
        sk_path, pk_path = keyfiles
        rcpt = tmp_path / "r.json"
        rcpt.write_text(json.dumps([{"suite": "B", "pubkey": open(pk_path).read().strip()}]))
        msg = tmp_path / "m"
        msg.write_bytes(b"same every time")
        b1, b2 = tmp_path / "1.purb", tmp_path / "2.purb"
        assert run("encode", "--to", rcpt, "--in", msg, "--out", b1, "--seed", "0123") == 0
        assert run("encode", "--to", rcpt, "--in", msg, "--out", b2, "--seed", "0123") == 0
        assert b1.read_bytes() == b2.read_bytes()

    def test_try_all(self, tmp_path, keyfiles, capsys):
        sk_path, pk_path = keyfiles
        rcpt = tmp_path / "r.json"
        rcpt.write_text(json.dumps([{"suite": "B", "pubkey": open(pk_path).read().strip()}]))
        msg = tmp_path / "m"
        msg.write_bytes(b"which suite?")
        blob = tmp_path / "m.purb"
        assert run("encode", "--to", rcpt, "--in", msg, "--out", blob) == 0
        dec = tmp_path / "d"
        assert run("decode", "--key", sk_path, "--try-all", "--in", blob, "--out", dec) == 0
        assert dec.read_bytes() == b"which suite?"

    def test_empty_recipient_file(self, tmp_path, keyfiles):
        rcpt = tmp_path / "r.json"
        rcpt.write_text("[]")
        msg = tmp_path / "m"
        msg.write_bytes(b"x")
        assert run("encode", "--to", rcpt, "--in", msg, "--out", tmp_path / "o") == 2

    def test_unknown_suite_in_recipient_file(self, tmp_path, capsys):
        rcpt = tmp_path / "r.json"
        rcpt.write_text('[{"suite": "Z", "pubkey": "00"}]')
        msg = tmp_path / "m"
        msg.write_bytes(b"x")
        assert run("encode", "--to", rcpt, "--in", msg, "--out", tmp_path / "o") == 2
        assert "unknown suite" in capsys.readouterr().err

    def test_missing_input_files_reported(self, tmp_path, keyfiles, capsys):
        sk_path, pk_path = keyfiles
        rcpt = tmp_path / "r.json"
        rcpt.write_text(json.dumps([{"suite": "B", "pubkey": open(pk_path).read().strip()}]))
        code = run(
            "encode", "--to", rcpt, "--in", tmp_path / "nope", "--out", tmp_path / "o"
        )
        assert code == 2
        assert "error:" in capsys.readouterr().err
        code = run(
            "decode", "--key", sk_path, "--suite", "B",
            "--in", tmp_path / "nope.purb", "--out", tmp_path / "o",
        )
        assert code == 2
        assert "error:" in capsys.readouterr().err


class TestPadCommand:
    @pytest.mark.parametrize("length,expect", [(9, "10"), (8, "8"), (1, "1")])
    def test_values(self, capsys, length, expect):
        assert run("pad", "--len", length) == 0
        assert capsys.readouterr().out.split()[0] == expect

    def test_spec_option(self, capsys):
        assert run("pad", "--len", "9", "--spec", "next2") == 0
        assert capsys.readouterr().out.split()[0] == "16"

    def test_overhead_shown(self, capsys):
        assert run("pad", "--len", "9") == 0
        assert "+11.11%" in capsys.readouterr().out


class TestAnalyzeCommand:
    def test_table_and_csv(self, tmp_path, capsys):
        sizes = tmp_path / "sizes.txt"
        sizes.write_text("\n".join(str(s) for s in range(1, 400)))
        out_csv = tmp_path / "rep.csv"
        assert run(
            "analyze", "--sizes", sizes, "--specs", "block:512", "next2", "padme",
            "--csv", out_csv,
        ) == 0
        out = capsys.readouterr().out
        assert "block:512" in out and "padme" in out
        rows = out_csv.read_text().strip().splitlines()
        assert len(rows) == 4  # header + three specs

    def test_bad_file(self, tmp_path):
        sizes = tmp_path / "sizes.txt"
        sizes.write_text("12\nnope\n")
        assert run("analyze", "--sizes", sizes) == 2


class TestBenchCommand:
    def test_small_run(self, capsys):
        assert run(
            "bench", "--recipients", "1,8", "--suites", "1", "--repeat", "1",
            "--payload", "256", "--seed", "dd",
        ) == 0
        out = capsys.readouterr().out
        lines = [l for l in out.splitlines() if l.strip()]
        assert len(lines) == 1 + 2 * 2  # header + (standard, flat) per r
        assert "standard" in out and "flat" in out

    def test_flat_worst_case_linear(self, capsys):
        assert run(
            "bench", "--recipients", "16", "--suites", "1", "--repeat", "1",
            "--payload", "64", "--seed", "ee",
        ) == 0
        out = capsys.readouterr().out
        rows = {}
        for line in out.splitlines()[1:]:
            cols = line.split()
            rows[cols[2]] = cols
        worst_flat = int(rows["flat"][7])
        worst_std = int(rows["standard"][7])
        assert worst_flat >= 16
        assert worst_std <= 16 .bit_length() + 4
