#!/usr/bin/env python3
"""Generate the seeded synthetic image corpus used by the experiments."""

import argparse

from cbir.synthetic import generate_corpus


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("out", help="corpus root directory (one subdir per class)")
    parser.add_argument("--classes", type=int, default=10)
    parser.add_argument("--per-class", type=int, default=20)
    parser.add_argument("--size", type=int, default=96)
    parser.add_argument("--seed", type=int, default=1234)
    args = parser.parse_args()
    root = generate_corpus(
        args.out,
        n_classes=args.classes,
        per_class=args.per_class,
        size=args.size,
        seed=args.seed,
    )
    print(f"wrote {args.classes * args.per_class} images under {root}")


if __name__ == "__main__":
    main()
