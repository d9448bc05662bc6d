#!/usr/bin/env python3
"""
TIP-GNN launcher script.

This script runs the command line from the src directory, e.g.
`python run.py train --dataset data/ia-workplace.edges`.
"""

import sys
from pathlib import Path

# Add src directory to path
src_path = Path(__file__).parent / 'src'
sys.path.insert(0, str(src_path))

# Import and run main
from main import main

if __name__ == '__main__':
    sys.exit(main())
