"""Random soundness sweep: axiom instances and verified lemma conclusions on random models."""
from __future__ import annotations

import argparse
import random
from dataclasses import dataclass, field

from beliefuse import Evaluator, Strategy
from beliefuse.kripke import random_model
from beliefuse.proof import DEFAULT_LIBRARY, SCHEMAS, lemma_instances
from beliefuse.sampling import axiom_instance

STRATEGY = {"DBFc": Strategy.CUTTING, "DBFs": Strategy.SKIPPING}


@dataclass
class SweepConfig:
    instances: int = 200
    models_per_lemma: int = 50
    seed: int = 0
    n_agents: int = 3
    max_worlds: int = 4
    atoms: tuple = ("p", "q")
    densities: tuple = (0.3, 0.5, 0.7)
    lemma_agents: int = 3
    lemma_len: int = 3
    rng: random.Random = field(init=False, repr=False)

    def __post_init__(self):
        self.rng = random.Random(self.seed)

    def model(self, n_agents=None):
        r = self.rng
        return random_model(r, r.randint(1, self.max_worlds), n_agents or self.n_agents, list(self.atoms), density=r.choice(self.densities))


def sweep_axioms(cfg: SweepConfig) -> dict:
    out = {}
    for system, schemas in SCHEMAS.items():
        for schema in schemas:
            bad = 0
            for _ in range(cfg.instances):
                w = axiom_instance(cfg.rng, schema, system, list(cfg.atoms), cfg.n_agents)
                bad += not Evaluator(cfg.model(), STRATEGY[system]).valid(w)
            out[f"{system}:{schema}"] = bad
    return out


def sweep_lemmas(cfg: SweepConfig) -> dict:
    """Premise-free lemmas must be valid; premise lemmas must hold wherever their premises hold everywhere."""
    out = {}
    for system, name in lemma_instances(cfg.lemma_agents, cfg.lemma_len):
        entry = DEFAULT_LIBRARY.lookup(system, name)
        bad = 0
        for _ in range(cfg.models_per_lemma):
            m = cfg.model(cfg.lemma_agents)
            ev = Evaluator(m, STRATEGY[system])
            if all(ev.valid(p) for p in entry.premises):
                bad += not ev.valid(entry.conclusion)
        out[f"{system}:{name}"] = bad
    return out


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--instances", type=int, default=SweepConfig.instances)
    ap.add_argument("--models-per-lemma", type=int, default=SweepConfig.models_per_lemma)
    ap.add_argument("--seed", type=int, default=SweepConfig.seed)
    ap.add_argument("--skip-lemmas", action="store_true")
    args = ap.parse_args(argv)
    cfg = SweepConfig(args.instances, args.models_per_lemma, args.seed)
    results = sweep_axioms(cfg)
    if not args.skip_lemmas:
        results.update(sweep_lemmas(cfg))
    failing = {k: v for k, v in results.items() if v}
    for k, v in failing.items():
        print(f"FAIL {k}: {v} violations")
    print(f"{len(results)} checks, {len(failing)} with violations")
    return 1 if failing else 0


if __name__ == "__main__":
    raise SystemExit(main())
