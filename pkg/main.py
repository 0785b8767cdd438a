"""
adrx command-line launcher

Runs the experiment harness without installing the package:

    python main.py run --config presets/adsorption_sweep.env --trials 200
"""

import sys

from dotenv import load_dotenv

# Load environment variables (ADRX_THREADS, ADRX_LOG_LEVEL, ...)
load_dotenv()

from adrx.cli.commands import main  # noqa: E402


# Development entry point
if __name__ == "__main__":
    sys.exit(main())
