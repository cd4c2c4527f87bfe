"""Write the shipped proof corpus and the instantiated order-law lemmas as .prf files."""
from __future__ import annotations

import argparse
from pathlib import Path

from beliefuse.proof import CORPUS, build, corpus_text, lemma_instances, parse_script, verify_library


def filename(system: str, name: str) -> str:
    return f"{system}_{name.replace('>', '-').replace('(', '_').replace(')', '').replace(',', '_')}.prf"


def export(out: Path, n_agents: int = 3, max_len: int = 3) -> list:
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name in CORPUS:
        (out / name).write_text(corpus_text(name))
        written.append(out / name)
    for system, name in lemma_instances(n_agents, max_len):
        path = out / filename(system, name)
        path.write_text(build(system, name))
        written.append(path)
    return written


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("out", type=Path)
    ap.add_argument("--agents", type=int, default=3)
    ap.add_argument("--max-len", type=int, default=3)
    ap.add_argument("--verify", action="store_true", help="also verify every exported script")
    args = ap.parse_args(argv)
    paths = export(args.out, args.agents, args.max_len)
    for p in paths:
        parse_script(p.read_text(), p.name)  # every file must at least parse back
    print(f"wrote {len(paths)} scripts to {args.out}")
    if args.verify:
        report = verify_library(args.agents, args.max_len)
        for f in report.failures:
            print(f"FAIL {f}")
        print(f"verified {report.checked - len(report.failures)}/{report.checked}")
        return 0 if report.ok else 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
