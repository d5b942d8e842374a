"""
Configuration settings for the ChainSim SFC placement simulator

Library-wide defaults. Every config dataclass takes its defaults from here,
and the experiment file parser documents them in ``--print-defaults``.
"""

import os

from dotenv import load_dotenv

load_dotenv()

# Topology (tree-to-star FiWi back-end with 15 ECNs)
ECN_COUNT = 15
TREE_DEPTH = 2
TREE_FANOUT = 3
STAR_LEAVES_PER_HUB = 2
ECN_INTERCONNECT = True
OPTICAL_BANDWIDTH = 10e9  # bits/sec
WIRELESS_BANDWIDTH = 54e6  # bits/sec per channel
WIRELESS_CHANNELS = 4
COMPUTE_CAPACITY_MEAN = 30e9  # cycles/sec
COMPUTE_CAPACITY_SPREAD = 10e9  # uniform on [20, 40] Gigacycles
SWITCH_CAPACITY = 10_000  # flow-table entries
OPTICAL_PROP_DELAY = 1e-4  # seconds
WIRELESS_PROP_DELAY = 5e-4  # seconds
TOPOLOGY_SEED = 2020

# Load balance objective weights (alpha, beta, gamma)
OBJECTIVE_WEIGHTS = (1 / 3, 1 / 3, 1 / 3)

# Placement
MAX_PATHS = 4
BISECTION_TOL = 1e-6  # relative to demand
KSMP_HOP_COST = 0.05
ILPS_EXACT_ECNS = 15  # exact branch and bound up to this many ECNs
ILPS_EXACT_STAGES = 5  # and this many stages
ILPS_BEAM_WIDTH = 1000  # partial plans kept per stage beyond that
ILPS_INCUMBENT_WIDTH = 64  # beam that seeds the branch-and-bound bound

# Scenarios
VNF_CATALOG = ("FW", "DPI", "NAT", "IDS", "LB", "PROXY", "CACHE", "VPN")

DATA_INTENSIVE = {
    "chain_len_range": (3, 5),
    "cpu_demand_range": (500e6, 1e9),  # cycles
    "data_size_range": (600e6, 1000e6),  # bytes, mean 800 MB
    "request_counts": (10, 20, 30, 40, 50, 60),
    "delay_bound": 60.0,
    "transfer_window": 6.0,  # seconds; bandwidth_demand = data_size * 8 / window
}

USER_INTENSIVE = {
    "chain_len_range": (3, 5),
    "cpu_demand_range": (10e6, 100e6),
    "data_size_range": (300e3, 800e3),
    "request_counts": (100, 200, 300, 400, 500, 600, 700, 800, 900, 1000),
    "delay_bound": 10.0,
    "transfer_window": 0.025,
}

# Run
DEFAULT_SEEDS = (1,)
OUTPUT_DIR = "results"
MAX_WORKERS = 1

# Logging Settings
LOG_LEVEL = os.getenv("CHAINSIM_LOG_LEVEL", "INFO")
LOG_FORMAT = "%(asctime)s - %(levelname)s: %(message)s"
LOG_DATEFMT = "%Y-%m-%d %H:%M:%S"

# Numeric tolerances
CAPACITY_RTOL = 1e-9
FLOW_EPS = 1e-12
