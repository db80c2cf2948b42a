"""fbgui: a self-contained framebuffer GUI toolkit.

Everything from pixel fills up to a desktop shell and form designer runs on
one deterministic event loop, so whole interactive sessions can be recorded,
replayed headlessly and compared frame hash by frame hash.
"""

__version__ = "0.1.0"
