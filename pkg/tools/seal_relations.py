"""Recompute the checksum line of the bundled relation data file."""

import hashlib
import pathlib
import sys

path = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "src/chowm3/data/relations.txt")
lines = path.read_text().splitlines(keepends=True)
body = "".join(l for l in lines if not l.startswith("checksum "))
digest = hashlib.sha256(body.encode()).hexdigest()
path.write_text(body + f"checksum sha256 {digest}\n")
print(digest)
