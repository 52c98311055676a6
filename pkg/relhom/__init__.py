"""
relhom : algèbre homologique relative sur les algèbres de carquois de
dimension finie à coefficients dans GF(p).
"""
__version__ = "0.1.0"
