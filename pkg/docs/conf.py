# -*- coding: utf-8 -*-
#
# robquant documentation build configuration file.
#
# This file is execfile()d with the current directory set to its containing dir.

import os
import sys

thisdir = os.path.abspath(os.path.dirname(__file__))
sys.path.insert(0, os.path.abspath(os.path.join(thisdir, '../src')))
import robquant

# -- General configuration -----------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.todo',
    'sphinx.ext.coverage',
    'sphinx.ext.viewcode',
    'sphinx.ext.intersphinx'
]

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = u'robquant'
copyright = u'2024, robquant developers'

version = robquant.__version__
release = robquant.__version__

exclude_patterns = ['_build']
pygments_style = 'sphinx'

# -- Options for HTML output ---------------------------------------------------

html_theme = 'alabaster'
htmlhelp_basename = 'robquantdoc'

# -- Options for manual page output --------------------------------------------

man_pages = [
    ('userdoc/usage', 'robquant', u'robquant command line',
     [u'robquant developers'], 1)
]

# -- Autodoc Config -------------------------------------------------------

autoclass_content = 'both'  # include __init__ docstring
autodoc_member_order = 'bysource'
autodoc_default_options = {'members': True, 'undoc-members': True, 'show-inheritance': True}


# -- Intersphinx Config ---------------------------------------------------
intersphinx_mapping = {'python': ('https://docs.python.org/3', None),
                       'numpy': ('https://numpy.org/doc/stable/', None),
                       'pandas': ('https://pandas.pydata.org/docs/', None)}
