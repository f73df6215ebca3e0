"""
Command handlers for the line geometry CLI.

Each module registers one verb on the shared subparser set and exposes a
handler returning the process exit code.
"""

from src.commands import analyze, autos, check_map, cliques, generate

COMMANDS = [generate, analyze, cliques, check_map, autos]
