#!/usr/bin/env python3
# -*- coding: utf-8 -*-
#
# antiptsv documentation build configuration file.
#
# Only the settings that differ from the sphinx-quickstart defaults are kept.

import os
import sys
sys.path.insert(0, os.path.abspath('..'))

on_rtd = os.environ.get('READTHEDOCS', None) == 'True'

if not on_rtd:  # only import and set the theme if we're building docs locally
    import sphinx_rtd_theme
    html_theme = 'sphinx_rtd_theme'

# -- General configuration ------------------------------------------------

extensions = ['sphinx.ext.autodoc',
              'sphinx.ext.doctest',
              'sphinx.ext.intersphinx',
              'sphinx.ext.todo',
              'sphinx.ext.mathjax',
              'sphinx.ext.viewcode',
              'sphinx.ext.napoleon']

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = 'antiptsv'
copyright = '2024, antiptsv developers'
author = 'antiptsv developers'

version = '1.0'
release = '1.0'

exclude_patterns = ['_build', 'Thumbs.db', '.DS_Store', '**tests**']
pygments_style = 'sphinx'
todo_include_todos = True

# Dataclass fields are documented in the class docstrings.
autodoc_member_order = 'bysource'
napoleon_google_docstring = True

# -- Options for HTML output ----------------------------------------------

htmlhelp_basename = 'antiptsvdoc'

# -- Options for LaTeX output ---------------------------------------------

latex_documents = [
    (master_doc, 'antiptsv.tex', 'antiptsv Documentation',
     'antiptsv developers', 'manual'),
]

# -- Options for manual page output ---------------------------------------

man_pages = [
    (master_doc, 'antiptsv', 'antiptsv Documentation',
     [author], 1)
]

intersphinx_mapping = {
    'python': ('https://docs.python.org/3', None),
    'numpy': ('https://numpy.org/doc/stable/', None),
    'scipy': ('https://docs.scipy.org/doc/scipy/', None),
    'pandas': ('https://pandas.pydata.org/pandas-docs/stable/', None),
}
