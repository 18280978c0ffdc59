#!/usr/bin/env python3
"""
Main entry point for the ghzsynth toolkit.
Handles only application startup and delegates to CLI module.
"""

if __name__ == '__main__':
    import sys
    from pathlib import Path

    # Repository root on the path so `src.` imports resolve
    sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

    from src.cli import main

    main()
