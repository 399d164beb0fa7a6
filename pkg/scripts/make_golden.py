"""Write the transcribed display expressions to tests/golden in the
serialization format.  Rerun only when a transcription changes."""

from pathlib import Path

from z22susy import displays as DS
from z22susy import models as M
from z22susy.serialize import dumps

OUT = Path(__file__).resolve().parent.parent / "tests" / "golden"


def golden() -> dict:
    sg = M.sine_gordon()
    lin = M.linear_sigma(1)
    ex = M.exotic_model()
    free = M.linear_sigma(1, "minkowski")
    return {
        "sine-gordon.eliminated": DS.sine_gordon(sg.ctx)["action"],
        "linear-sigma.component": DS.linear_sigma_action(lin.ctx, M._metric(1, "abstract")),
        "exotic.component": DS.exotic(ex.ctx)["action"],
        "free.superspace-el": DS.free_superspace_expansion(free.ctx),
    }


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for name, e in golden().items():
        (OUT / f"{name}.txt").write_text(dumps(e))
        print("wrote", name)


if __name__ == "__main__":
    main()
