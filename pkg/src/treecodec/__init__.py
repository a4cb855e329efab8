"""
treecodec

Tree-decomposition based graph codec: canonical tree encoding, graph to
decision-sequence coding, count-based decision models and evaluation.
"""

__version__ = "0.1.0"
