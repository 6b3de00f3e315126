"""Recompute the worked examples: plausible sets, SPE outcomes of example structures, figures."""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from _common import parse_config, write_json

from commitment_limits.cli import build_charts
from commitment_limits.cst import parse_cst
from commitment_limits.families import make_coordination, make_duopoly
from commitment_limits.oracle import Grid, GridGame, project
from commitment_limits.plausibility import plausibility_report

EXAMPLES = [
    ("duopoly", (0.8, 0.0), ["[0,3/2)|[3/2,5/3]", "(1/8,1/3]|[0,1/8]u(1/3,5/3]"]),
    ("duopoly", (1.2, 0.0), []),
    ("coordination", 0.0, ["[1/9,4/9)|[0,1/9)u[4/9,1]", "[0,0.75]|[0.25,1]"]),
]


@dataclass
class Config:
    out_dir: str = "results/examples"
    grid_n: int = 201
    figures: bool = False


def endpoints(sym):
    return [e for el in list(sym.elements) + [sym.singletons] for p in el for e in (p.lo, p.hi)]


def main(cfg: Config) -> None:
    out = Path(cfg.out_dir)
    for family, params, literals in EXAMPLES:
        spec = make_duopoly(params) if family == "duopoly" else make_coordination(params)
        tag = spec.name + "".join(f"_{k}{v:g}" for k, v in spec.params)
        rep = {"game": spec.describe(), "plausibility": plausibility_report(spec).to_json(), "structures": []}
        for lit in literals:
            sym = parse_cst(lit, spec.leader_space)
            g = Grid.for_spec(spec, cfg.grid_n, endpoints(sym))
            game = GridGame(spec, g)
            cst = project(sym, g)
            rep["structures"].append({"literal": lit, "spe": game.spe_outcomes(cst).to_json(),
                                      "leader_preferred": game.spe_outcomes_leader_preferred(cst).to_json()})
        print(write_json(rep, out / f"{tag}.json"))
        if cfg.figures:
            for key, chart in build_charts(spec).items():
                path = out / f"{tag}_{key}.svg"
                path.write_text(chart.render(), encoding="utf-8")
                print(path)


if __name__ == "__main__":
    main(parse_config(Config, __doc__))
