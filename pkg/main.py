#!/usr/bin/env python3
"""
Relaxation Bandit Bench - Main Entry Point
Usage: python main.py {run,verify,summarize} --config experiment.yaml
"""
import sys
import os

# Add the src directory to the Python path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), 'src'))

from src.app import create_signal_handler, main

if __name__ == "__main__":
    create_signal_handler()
    sys.exit(main())
