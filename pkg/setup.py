#!/usr/bin/env python3
"""
Setup script for ChainSim
"""

import subprocess
import sys
from pathlib import Path


def run_command(command, description):
    """Run a command and handle errors."""
    print(f"🔄 {description}...")
    try:
        subprocess.run(command, shell=True, check=True, capture_output=True, text=True)
        print(f"✅ {description} completed successfully")
        return True
    except subprocess.CalledProcessError as e:
        print(f"❌ {description} failed: {e}")
        print(f"Error output: {e.stderr}")
        return False


def create_directories():
    """Create output directories for the bundled experiment files."""
    for directory in ("results/data_intensive", "results/user_intensive"):
        Path(directory).mkdir(parents=True, exist_ok=True)
        print(f"✅ Created directory: {directory}")


def test_installation():
    """Import the package and build the default network."""
    print("🧪 Testing installation...")
    try:
        from chainsim import __version__
        from chainsim.network import build_tree_star, TopologyConfig

        net = build_tree_star(TopologyConfig())
        print(f"✅ ChainSim {__version__} imported; default network has "
              f"{len(net.ecn_ids)} ECNs and {len(net.links)} links")
        return True
    except Exception as e:
        print(f"❌ Installation test failed: {e}")
        return False


def main():
    """Main setup function."""
    print("🚀 Setting up ChainSim")
    print("=" * 60)

    create_directories()

    if not run_command(f"{sys.executable} -m pip install -r requirements.txt", "Installing requirements"):
        sys.exit(1)

    if not test_installation():
        sys.exit(1)

    print("\n" + "=" * 60)
    print("🎉 Setup completed successfully!")
    print("\n📋 Next steps:")
    print("1. Data-intensive sweep: python run_chainsim.py run --config configs/data_intensive.cfg")
    print("2. User-intensive sweep: python run_chainsim.py run --config configs/user_intensive.cfg")
    print("3. Run the tests: pytest -m 'not slow'")


if __name__ == "__main__":
    if len(sys.argv) > 1:
        # Invoked by a build backend (pip / setuptools); metadata lives in pyproject.toml
        from setuptools import setup
        setup()
    else:
        main()
