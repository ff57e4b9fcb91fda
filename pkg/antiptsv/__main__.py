# -*- coding: utf-8 -*-
#    Copyright (C) 2024  antiptsv developers
#
#    Released under the MIT license, a copy of which is located at the root of
#    this project.
"""Entry point for ``python -m antiptsv``."""


import sys

from .cli import main


sys.exit(main())
