"""Command-line tool: keygen, encode, decode, pad, analyze, bench."""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import analyzer
from .codec import (
    DecodeError,
    Identity,
    Recipient,
    decode,
    encode_detailed,
)
from .padding import PadSpec, overhead
from .rng import RandomSource, seeded_rng, system_rng
from .suites import (
    PASSWORD,
    PUBLIC_KEY,
    default_registry,
    keygen,
    read_secret_key,
    write_key_files,
)


def _pad_spec(text: str) -> PadSpec:
    return PadSpec.from_string(text)


def _seed_rng(seed_hex: str | None) -> RandomSource:
    if seed_hex is None:
        return system_rng()
    return seeded_rng(bytes.fromhex(seed_hex))


def cmd_keygen(args) -> int:
    registry = default_registry()
    suite = registry.by_alias(args.suite)
    kp = keygen(suite, _seed_rng(args.seed))
    try:
        sk_path, pk_path = write_key_files(args.out, kp)
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    print(f"{suite.alias} ({suite.name}): wrote {sk_path} and {pk_path}")
    return 0


def _load_recipients(path: str, registry) -> list[Recipient]:
    with open(path, "r", encoding="utf-8") as f:
        entries = json.load(f)
    if not isinstance(entries, list) or not entries:
        raise ValueError("recipient file must be a non-empty JSON array")
    recipients = []
    for i, entry in enumerate(entries):
        try:
            suite = registry.by_alias(entry["suite"])
        except KeyError:
            raise ValueError(f"recipient {i}: unknown suite {entry.get('suite')!r}")
        if suite.kind == PASSWORD:
            recipients.append(
                Recipient.password(suite, entry["passphrase"].encode())
            )
        else:
            recipients.append(
                Recipient.public_key(suite, bytes.fromhex(entry["pubkey"]))
            )
    return recipients


def _dummy_recipient(suite, rng) -> Recipient:
    if suite.kind == PASSWORD:
        return Recipient.password(suite, rng.randbytes(32).hex().encode())
    return Recipient.public_key(suite, keygen(suite, rng).pk_encoded)


def cmd_encode(args) -> int:
    registry = default_registry()
    rng = _seed_rng(args.seed)
    try:
        recipients = _load_recipients(args.to, registry)
        # Throwaway extra recipients mask the real recipient count.
        for _ in range(args.dummy):
            recipients.append(_dummy_recipient(recipients[0].suite, rng))
        with open(args.infile, "rb") as f:
            payload = f.read()
        blob, report = encode_detailed(recipients, payload, args.pad, rng)
        with open(args.out, "wb") as f:
            f.write(blob)
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    print(
        f"wrote {args.out}: {report.purb_len} bytes total, "
        f"{report.header_len} header, "
        f"compactness {report.compactness * 100:.1f}%"
    )
    return 0


def cmd_decode(args) -> int:
    registry = default_registry()
    try:
        if args.passphrase is not None:
            kinds = PASSWORD
            secret = args.passphrase.encode()
        else:
            if args.key is None:
                print(
                    "error: need --key with --suite, or --passphrase",
                    file=sys.stderr,
                )
                return 2
            kinds = PUBLIC_KEY
            secret = read_secret_key(args.key)
        if args.try_all:
            candidates = [s for s in registry if s.kind == kinds]
        elif kinds == PASSWORD:
            candidates = [s for s in registry if s.kind == PASSWORD]
        else:
            if args.suite is None:
                print("error: need --suite (or --try-all)", file=sys.stderr)
                return 2
            candidates = [registry.by_alias(args.suite)]
        with open(args.infile, "rb") as f:
            blob = f.read()
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2

    exp = trials = tables = 0
    for suite in candidates:
        if suite.kind == PASSWORD:
            ident = Identity(suite, passphrase=secret)
        else:
            ident = Identity(suite, secret_key=secret)
        try:
            payload, stats = decode(blob, ident)
        except DecodeError as e:
            exp += e.stats.exp_count
            trials += e.stats.trial_count
            tables += e.stats.tables_scanned
            continue
        try:
            with open(args.out, "wb") as f:
                f.write(payload)
        except OSError as e:
            print(f"error: {e}", file=sys.stderr)
            return 2
        if args.stats:
            print(
                f"exp_count={exp + stats.exp_count} "
                f"trial_count={trials + stats.trial_count} "
                f"tables_scanned={tables + stats.tables_scanned}"
            )
        return 0
    print("decode failed")
    return 1


def cmd_pad(args) -> int:
    padded = args.spec.pad_len(args.length)
    if args.length >= 1:
        add, mult = overhead(args.spec, args.length)
        print(f"{padded} (+{add} bytes, +{float(mult) * 100:.2f}%)")
    else:
        print(f"{padded} (+0 bytes, +0.00%)")
    return 0


def cmd_analyze(args) -> int:
    try:
        ds = analyzer.load_sizes(args.sizes, column=args.column)
    except (OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    reports = analyzer.compare(ds, args.specs)
    print(f"{ds.name}: {len(ds.sizes)} objects")
    print(analyzer.render_table(reports))
    if args.csv:
        analyzer.write_csv(reports, args.csv)
        print(f"wrote {args.csv}")
    return 0


def cmd_bench(args) -> int:
    registry = default_registry()
    rng = _seed_rng(args.seed)
    suites = registry.public_key_suites()[: args.suites]
    payload = b"\x00" * args.payload
    rows = []
    for r in args.recipients:
        keypairs = []
        recipients = []
        for i in range(r):
            suite = suites[i % len(suites)]
            kp = keygen(suite, rng)
            keypairs.append(kp)
            recipients.append(Recipient.public_key(suite, kp.pk_encoded))
        outsider = keygen(suites[0], rng)
        for mode, flat in (("standard", False), ("flat", True)):
            enc_ms = dec_ms = 0.0
            stats = worst = report = None
            for _ in range(args.repeat):
                t0 = time.perf_counter()
                blob, report = encode_detailed(
                    recipients, payload, PadSpec.padme(), rng, flat=flat
                )
                t1 = time.perf_counter()
                kp = keypairs[-1]  # last placed: the worst case in flat mode
                payload_out, stats = decode(
                    blob, Identity(kp.suite, secret_key=kp.sk), flat=flat
                )
                t2 = time.perf_counter()
                assert payload_out == payload
                enc_ms += (t1 - t0) * 1e3
                dec_ms += (t2 - t1) * 1e3
                try:
                    decode(blob, Identity(suites[0], secret_key=outsider.sk), flat=flat)
                except DecodeError as e:
                    worst = e.stats
            rows.append(
                (
                    r,
                    len(suites),
                    mode,
                    enc_ms / args.repeat,
                    dec_ms / args.repeat,
                    stats.exp_count,
                    stats.trial_count,
                    worst.trial_count,
                    report.compactness * 100,
                )
            )
    print(
        f"{'r':>6} {'suites':>6} {'mode':>8} {'enc_ms':>9} {'dec_ms':>9} "
        f"{'exp':>4} {'trials':>6} {'worst':>6} {'compact%':>8}"
    )
    for row in rows:
        print(
            f"{row[0]:>6} {row[1]:>6} {row[2]:>8} {row[3]:>9.2f} {row[4]:>9.2f} "
            f"{row[5]:>4} {row[6]:>6} {row[7]:>6} {row[8]:>8.1f}"
        )
    return 0


def _recipient_counts(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="purb",
        description="Encode and decode padded uniform random blobs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("keygen", help="generate a key pair for a suite")
    p.add_argument("--suite", required=True, choices=list("ABCDEF"))
    p.add_argument("--out", required=True, help="output file prefix")
    p.add_argument("--seed", help="hex seed; INSECURE, for tests only")
    p.set_defaults(func=cmd_keygen)

    p = sub.add_parser("encode", help="encrypt a file for a set of recipients")
    p.add_argument("--to", required=True, help="recipient list (JSON)")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument(
        "--pad",
        type=_pad_spec,
        default=PadSpec.padme(),
        help="padme | next2 | block:<b> | none (default padme)",
    )
    p.add_argument(
        "--dummy",
        type=int,
        default=0,
        metavar="N",
        help="add N throwaway recipients of the first listed suite",
    )
    p.add_argument("--seed", help="hex seed; INSECURE, for tests only")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="decrypt a blob")
    p.add_argument("--key", help="private key file")
    p.add_argument("--suite", choices=list("ABCDEF"))
    p.add_argument("--passphrase", help="decode with a passphrase instead of a key")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--stats", action="store_true", help="print operation counts")
    p.add_argument(
        "--try-all",
        action="store_true",
        help="try every suite from the canonical list",
    )
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("pad", help="compute a padded length")
    p.add_argument("--len", dest="length", type=int, required=True)
    p.add_argument("--spec", type=_pad_spec, default=PadSpec.padme())
    p.set_defaults(func=cmd_pad)

    p = sub.add_parser("analyze", help="size-anonymity report for a dataset")
    p.add_argument("--sizes", required=True, help="sizes file")
    p.add_argument("--column", help="read sizes from this CSV column")
    p.add_argument(
        "--specs",
        type=_pad_spec,
        nargs="+",
        default=[PadSpec.fixed_block(512), PadSpec.next_p2(), PadSpec.padme()],
    )
    p.add_argument("--csv", help="also write the report as CSV")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("bench", help="encode/decode cost, standard vs flat layout")
    p.add_argument(
        "--recipients", type=_recipient_counts, default=[1, 10, 100], metavar="R1,R2"
    )
    p.add_argument("--suites", type=int, default=1)
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--payload", type=int, default=1024)
    p.add_argument("--seed", help="hex seed; INSECURE, for tests only")
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
