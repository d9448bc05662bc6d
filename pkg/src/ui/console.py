"""Console output for the TIP-GNN command line."""

import sys
from typing import Dict, Iterable, Optional, Sequence, Tuple

# Fix Windows Unicode encoding (only if not in pytest)
if sys.platform == 'win32' and 'pytest' not in sys.modules:
    try:
        import io
        if hasattr(sys.stdout, 'buffer'):
            sys.stdout = io.TextIOWrapper(
                sys.stdout.buffer,
                encoding='utf-8',
                line_buffering=True,
                write_through=True
            )
    except (AttributeError, ValueError):
        pass  # Already wrapped or not needed


class Colors:
    """ANSI color codes for terminal output."""
    RED = '\033[31m'
    GREEN = '\033[32m'
    YELLOW = '\033[33m'
    BLUE = '\033[34m'
    CYAN = '\033[36m'
    WHITE = '\033[37m'

    BRIGHT_RED = '\033[91m'
    BRIGHT_GREEN = '\033[92m'
    BRIGHT_YELLOW = '\033[93m'
    BRIGHT_BLUE = '\033[94m'
    BRIGHT_WHITE = '\033[97m'

    BOLD = '\033[1m'
    DIM = '\033[2m'
    RESET = '\033[0m'


class ConsoleUI:
    """Console-based reporting with colors."""

    @staticmethod
    def print_header(text: str):
        """Print a formatted header."""
        print(f"\n{Colors.CYAN}{Colors.BOLD}{'=' * 70}")
        print(f"  {text}")
        print(f"{'=' * 70}{Colors.RESET}\n")
        sys.stdout.flush()

    @staticmethod
    def print_section(text: str):
        """Print a section divider."""
        print(f"\n{Colors.BLUE}{Colors.BOLD}{'-' * 70}")
        print(f"  {text}")
        print(f"{'-' * 70}{Colors.RESET}\n")
        sys.stdout.flush()

    @staticmethod
    def print_info(text: str):
        """Print informational text."""
        print(f"{Colors.BRIGHT_BLUE}ℹ  {text}{Colors.RESET}")

    @staticmethod
    def print_success(text: str, file_name: Optional[str] = None):
        """Print success message in green."""
        if file_name:
            print(f"{Colors.BRIGHT_GREEN}{Colors.BOLD}✓ {text} ({file_name}){Colors.RESET}")
        else:
            print(f"{Colors.BRIGHT_GREEN}{Colors.BOLD}✓ {text}{Colors.RESET}")

    @staticmethod
    def print_error(text: str):
        """Print error message in red."""
        print(f"{Colors.BRIGHT_RED}{Colors.BOLD}✗ {text}{Colors.RESET}")

    @staticmethod
    def print_warning(text: str):
        """Print warning message in yellow."""
        print(f"{Colors.BRIGHT_YELLOW}⚠  {text}{Colors.RESET}")

    @staticmethod
    def print_record(text: str):
        """Print a machine-parseable record line without decoration."""
        print(text)
        sys.stdout.flush()

    @staticmethod
    def display_dataset_summary(name: str, stats):
        """
        Display dataset statistics.

        Args:
            name: Dataset path or label
            stats: GraphStatistics of the loaded graph
        """
        ConsoleUI.print_section(f"Dataset: {name}")
        rows = [
            ("Nodes |V|", f"{stats.num_nodes}"),
            ("Interactions |E|", f"{stats.num_edges}"),
            ("Density", f"{stats.density:.4f}"),
            ("Repetition", f"{stats.repetition:.4f}"),
            ("Timespan (days)", f"{stats.timespan_days:.2f}"),
        ]
        for label, value in rows:
            print(f"{Colors.BRIGHT_WHITE}{Colors.BOLD}{label + ':':<20}{Colors.RESET} {value}")
        print()
        sys.stdout.flush()

    @staticmethod
    def display_epoch(record):
        """One line per training epoch."""
        auc = "   n/a" if record.val_auc is None else f"{record.val_auc:.4f}"
        acc = "   n/a" if record.val_accuracy is None else f"{record.val_accuracy:.4f}"
        flag = f" {Colors.BRIGHT_RED}aborted{Colors.RESET}" if record.aborted else ""
        print(
            f"  {Colors.DIM}epoch {record.epoch:>3}{Colors.RESET}  loss {record.loss:.4f}  "
            f"val acc {acc}  val auc {auc}  {Colors.DIM}{record.seconds:.1f}s{Colors.RESET}{flag}"
        )
        sys.stdout.flush()

    @staticmethod
    def display_seed_result(row):
        """Status line for one finished seed."""
        if not row.ok:
            ConsoleUI.print_error(f"seed {row.seed} failed: {row.error}")
            return
        metrics = "  ".join(f"{name} {value:.4f}" for name, value in sorted(row.metrics.items()))
        ConsoleUI.print_success(f"seed {row.seed}: {metrics}  (best epoch {row.best_epoch}/{row.epochs})")
        if row.hit_max_epochs:
            ConsoleUI.print_warning(f"seed {row.seed} stopped at max_epochs without early stopping")

    @staticmethod
    def display_results_table(rows: Iterable[Tuple[str, Dict[str, Tuple[float, float]]]]):
        """
        Display aggregate rows as `mean ± std` per metric.

        Args:
            rows: (label, {metric: (mean, std)}) pairs, one per experiment
        """
        rows = list(rows)
        metrics = sorted({name for _, agg in rows for name in agg})
        if not metrics:
            ConsoleUI.print_warning("No successful runs to summarize.")
            return
        width = max(12, max(len(label) for label, _ in rows) + 2)
        header = f"{'':<{width}}" + "".join(f"{name:>20}" for name in metrics)
        print(f"{Colors.BRIGHT_WHITE}{Colors.BOLD}{header}{Colors.RESET}")
        for label, agg in rows:
            cells = "".join(
                f"{agg[name][0]:>11.4f} ± {agg[name][1]:<6.4f}" if name in agg else f"{'-':>20}"
                for name in metrics
            )
            print(f"{label:<{width}}{cells}")
        print()
        sys.stdout.flush()

    @staticmethod
    def display_attention_preview(table, node_names: Optional[Sequence] = None, limit: int = 10):
        """Show the first rows of an attention table and the per-step means."""
        ConsoleUI.print_section("Fusion weights per propagation step (last layer)")
        header = f"{'node':<12}{'t':>14}" + "".join(f"{'step ' + str(k):>10}" for k in range(table.steps))
        print(f"{Colors.BRIGHT_WHITE}{Colors.BOLD}{header}{Colors.RESET}")
        for node, t, row in list(zip(table.nodes.tolist(), table.times.tolist(), table.weights))[:limit]:
            name = node_names[node] if node_names is not None else node
            print(f"{str(name):<12}{t:>14.1f}" + "".join(f"{w:>10.4f}" for w in row))
        means = "".join(f"{w:>10.4f}" for w in table.mean)
        print(f"{Colors.BOLD}{'mean':<12}{'':>14}{means}{Colors.RESET}\n")
        sys.stdout.flush()
