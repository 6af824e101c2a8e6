# shared between test_acceptance.py and the terminal-summary hook
LINES: dict[int, str] = {}
