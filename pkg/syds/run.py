#!/usr/bin/env python3
"""
Quick start script for the SyDS toolkit CLI
"""

import sys
from pathlib import Path

# Add project root to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

# Load environment variables
from dotenv import load_dotenv
load_dotenv()

from syds.main import main

if __name__ == "__main__":
    sys.exit(main())
