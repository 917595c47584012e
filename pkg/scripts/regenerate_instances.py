import json
from pathlib import Path

from clutterforge.formats import subspace_to_json
from clutterforge.gf import build_field
from clutterforge.vspace import span

INSTANCE_DIR = Path(__file__).parents[1] / "tests" / "data" / "instances"

# name -> (q, n, generators)
JSON_INSTANCES = {
    "ex92.json": (4, 3, [(1, 1, 0), (1, 0, 1)]),
}


def main() -> None:
    for name, (q, n, generators) in JSON_INSTANCES.items():
        S = span(build_field(q), n, generators)
        path = INSTANCE_DIR / name
        path.write_text(json.dumps(subspace_to_json(S)) + "\n")
        print(f"wrote {path.relative_to(INSTANCE_DIR.parents[2])}: {S}")


if __name__ == "__main__":
    main()
