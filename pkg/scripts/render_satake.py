"""Write the recorded Satake diagram of a real form as text, DOT or JSON.

Usage: python scripts/render_satake.py LABEL [--format dot] [-o FILE]
Pipe DOT output through `dot -Tsvg` to draw it.
"""

import argparse
from pathlib import Path

from iwasawa.satake import expected_satake, render


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("label")
    p.add_argument("--format", choices=("text", "dot", "json"), default="dot")
    p.add_argument("-o", "--output")
    args = p.parse_args()
    out = render(expected_satake(args.label), args.format)
    if args.output:
        Path(args.output).write_text(out)
    else:
        print(out, end="")


if __name__ == "__main__":
    main()
