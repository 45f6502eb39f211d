# Empty __init__.py to mark the directory as a Python package