# Build entry point for installing from the repository root; the package metadata lives in src/setup.py.
import runpy
from os import path

runpy.run_path(path.join(path.dirname(path.abspath(__file__)), 'src', 'setup.py'), run_name='__main__')
