"""Validate the shipped run configurations against configs/schema.json."""
import json
import pathlib
import sys

import jsonschema

root = pathlib.Path(sys.argv[1])
schema = json.loads((root / "schema.json").read_text())
for path in sorted(root.glob("example*.json")):
    jsonschema.validate(json.loads(path.read_text()), schema)
    print(f"{path.name}: ok")
