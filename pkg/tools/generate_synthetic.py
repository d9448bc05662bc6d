#!/usr/bin/env python3
"""
Synthetic Dataset Generator

Writes the two synthetic datasets used to sanity-check the pipeline:
- a planted-transition temporal network, where each source's next neighbor
  is a fixed function of its previous two neighbors (edge list format)
- a planted-separation embedding set for the downstream node classifier
  (CSV rows `label, x_1 .. x_d`), optionally with permuted labels
"""

import argparse
import sys
from pathlib import Path

# Add src directory to path
sys.path.insert(0, str(Path(__file__).resolve().parent.parent / 'src'))

from experiments.synthetic import (
    planted_separation,
    planted_transition_edges,
    write_edge_list,
    write_embeddings,
)


def generate_transitions(args: argparse.Namespace) -> Path:
    records = planted_transition_edges(
        num_nodes=args.nodes,
        num_interactions=args.interactions,
        seed=args.seed,
        mean_gap=args.mean_gap,
    )
    path = write_edge_list(records, args.output)
    print(f"✅ {len(records)} interactions over {args.nodes} nodes written to {path}")
    return path


def generate_separation(args: argparse.Namespace) -> Path:
    embeddings, labels = planted_separation(
        n=args.rows,
        d=args.dim,
        positive_rate=args.positive_rate,
        margin=args.margin,
        seed=args.seed,
        permute=args.permute,
    )
    path = write_embeddings(embeddings, labels, args.output)
    print(f"✅ {len(labels)} rows ({int(labels.sum())} positive) written to {path}")
    return path


def main() -> int:
    """
    Main entry point for the script.

    Returns:
        Exit code (0 for success, 1 for failure)
    """
    parser = argparse.ArgumentParser(
        description="Generate synthetic datasets with known structure",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  %(prog)s transitions -o data/planted.edges
  %(prog)s transitions --nodes 50 --interactions 2000 -o data/small.edges
  %(prog)s separation -o data/separation.csv
  %(prog)s separation --permute -o data/permuted.csv
        """
    )
    sub = parser.add_subparsers(dest="kind", required=True)

    transitions = sub.add_parser("transitions", help="planted-transition temporal network")
    transitions.add_argument("--nodes", type=int, default=200, help="number of nodes (default: 200)")
    transitions.add_argument("--interactions", type=int, default=20000,
                             help="number of interactions (default: 20000)")
    transitions.add_argument("--mean-gap", type=float, default=60.0,
                             help="mean seconds between interactions (default: 60)")
    transitions.set_defaults(handler=generate_transitions)

    separation = sub.add_parser("separation", help="planted-separation embedding set")
    separation.add_argument("--rows", type=int, default=2000, help="number of rows (default: 2000)")
    separation.add_argument("--dim", type=int, default=16, help="embedding width (default: 16)")
    separation.add_argument("--positive-rate", type=float, default=0.3, help="share of positives (default: 0.3)")
    separation.add_argument("--margin", type=float, default=4.0, help="shift of the positives (default: 4.0)")
    separation.add_argument("--permute", action="store_true", help="shuffle the labels")
    separation.set_defaults(handler=generate_separation)

    for sp in (transitions, separation):
        sp.add_argument("-o", "--output", type=Path, required=True, help="output file")
        sp.add_argument("--seed", type=int, default=0, help="random seed (default: 0)")

    args = parser.parse_args()
    try:
        args.handler(args)
    except (OSError, ValueError) as e:
        print(f"❌ Error writing dataset: {e}")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
