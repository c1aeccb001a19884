"""
Root conftest - puts the flat top-level packages on sys.path
"""
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))
