# -*- coding: utf-8 -*-
# pylint: disable=invalid-name
"""
trotex documentation build configuration file.

This file is execfile()d with the current directory set to its
containing dir.
"""

import os
import sys
import sphinx_rtd_theme
sys.path.insert(0, os.path.abspath('../..'))
from trotex.version import __version__  # noqa: E402

# -- General configuration ------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.doctest',
    'sphinx.ext.intersphinx',
    'sphinx.ext.mathjax',
    'sphinx.ext.viewcode',
    'sphinx.ext.autosectionlabel',
    'sphinx.ext.graphviz',
    'sphinxarg.ext'
]

autodoc_member_order = 'bysource'

templates_path = ['_templates']

source_suffix = '.rst'

master_doc = 'index'

project = u'trotex'
author = u'Greenhost BV'

# The short X.Y version and the full version.
version = __version__
release = __version__

language = None

exclude_patterns = []

pygments_style = 'sphinx'

# -- Options for HTML output ----------------------------------------------

html_theme = "sphinx_rtd_theme"
html_theme_options = {}
html_theme_path = [sphinx_rtd_theme.get_html_theme_path()]

html_static_path = ['_static']

html_show_sphinx = False

html_show_copyright = False

htmlhelp_basename = 'trotexdoc'

# -- Options for LaTeX, manual page and Texinfo output --------------------

latex_documents = [
    (master_doc, 'trotex.tex', u'trotex Documentation', author, 'manual'),
]

man_pages = [
    (master_doc, 'trotex', u'trotex Documentation', [author], 1)
]

texinfo_documents = [
    (master_doc, 'trotex', u'trotex Documentation', author, 'trotex',
     'Trotter error extrapolation experiments', 'Miscellaneous'),
]

intersphinx_mapping = {
    'https://docs.python.org/3/': None,
    'https://numpy.org/doc/stable/': None,
}
