# This file is part of ts_sfh_torsion.
#
# Developed for the Vera C. Rubin Observatory Telescope and Site Systems.
# This product includes software developed by the LSST Project
# (https://www.lsst.org).
# See the COPYRIGHT file at the top-level directory of this distribution
# for details of code ownership.
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with this program.  If not, see <https://www.gnu.org/licenses/>.

__all__ = [
    "CONFIG_SCHEMA",
    "DIAGRAM_SCHEMA",
    "COMPLEX_SCHEMA",
    "GLUING_MAP_SCHEMA",
    "OPEN_BOOK_SCHEMA",
]

import yaml

CONFIG_SCHEMA = yaml.safe_load(
    """
$schema: http://json-schema.org/draft-07/schema#
$id: https://github.com/lsst-ts/ts_sfh_torsion/blob/main/python/lsst/ts/sfhtorsion/config_schema.py
title: SFH torsion run configuration v1
description: Schema for run configuration files of run_sfh_torsion
type: object
additionalProperties: false
properties:
  cap:
    description: Largest boundary depth k tried before the torsion is undetermined.
    type: integer
    minimum: 0
    default: 64
  exact:
    description: >-
      Resolve values beyond the cap with the exact F2[u] backend
      (certifying infinity when the class never bounds).
    type: boolean
    default: false
  backend:
    description: Backend used for the per-k boundary depth scan.
    type: string
    enum:
      - iterative
      - exact
    default: iterative
  output:
    description: Report format.
    type: string
    enum:
      - json
      - text
    default: json
  page_window:
    description: Largest page and filtration level for which page dimensions may be computed.
    type: object
    additionalProperties: false
    properties:
      r_max:
        type: integer
        minimum: 0
        default: 8
      p_max:
        type: integer
        minimum: 0
        default: 8
    default: {}
  dump_domains:
    description: Include the domain of every disk in disk reports.
    type: boolean
    default: false
  sample_size:
    description: Number of random elements used for chain map spot checks.
    type: integer
    minimum: 0
    default: 32
  seed:
    description: Seed for the random spot checks.
    type: integer
    default: 0
"""
)

DIAGRAM_SCHEMA = yaml.safe_load(
    """
$schema: http://json-schema.org/draft-07/schema#
title: Sutured Heegaard diagram v1
description: >-
  Region-first description of a multi-pointed sutured Heegaard diagram.
  Curve arrays list point ids in traversal order; curve indices are
  positions in these arrays, starting at 0.
type: object
additionalProperties: false
required:
  - alpha
  - beta
  - points
  - regions
properties:
  alpha:
    type: array
    items:
      type: array
      items:
        type: string
  beta:
    type: array
    items:
      type: array
      items:
        type: string
  points:
    type: object
    additionalProperties:
      type: object
      additionalProperties: false
      required:
        - alpha
        - beta
        - quadrants
      properties:
        alpha:
          type: integer
          minimum: 0
        beta:
          type: integer
          minimum: 0
        quadrants:
          type: object
          additionalProperties: false
          required: [NE, NW, SW, SE]
          properties:
            NE:
              type: string
            NW:
              type: string
            SW:
              type: string
            SE:
              type: string
  regions:
    type: array
    items:
      type: object
      additionalProperties: false
      required:
        - id
        - chi
        - corners
      properties:
        id:
          type: string
        chi:
          type: integer
        corners:
          type: array
          items:
            type: array
            minItems: 2
            maxItems: 2
            items:
              - type: string
              - type: string
                enum: [NE, NW, SW, SE]
        on_boundary:
          type: boolean
          default: false
        basepoints:
          type: integer
          minimum: 0
          default: 0
  eh:
    type: array
    items:
      type: string
"""
)

COMPLEX_SCHEMA = yaml.safe_load(
    """
$schema: http://json-schema.org/draft-07/schema#
title: Filtered complex fixture v1
description: >-
  Generators and counted disks of a J+ filtered complex. Generator beta lists
  give, for alpha curves 1..d, the index (starting at 1) of the beta curve
  through the chosen point.
type: object
additionalProperties: false
required:
  - generators
  - eh
  - disks
properties:
  generators:
    type: array
    items:
      type: object
      additionalProperties: false
      required:
        - name
      properties:
        name:
          type: string
        cycles:
          type: integer
          minimum: 0
        beta:
          type: array
          items:
            type: integer
            minimum: 1
  eh:
    type: string
  disks:
    type: array
    items:
      type: object
      additionalProperties: false
      required:
        - from
        - to
        - jplus
      properties:
        from:
          type: string
        to:
          type: string
        jplus:
          type: integer
          minimum: 0
          multipleOf: 2
        shape:
          type: string
          enum: [bigon, rectangle]
        name:
          type: string
"""
)

GLUING_MAP_SCHEMA = yaml.safe_load(
    """
$schema: http://json-schema.org/draft-07/schema#
title: Gluing map v1
description: >-
  Embedding of a sub-diagram into a super-diagram. Curve maps are keyed by
  the sub-diagram curve index written as a string.
type: object
additionalProperties: false
required:
  - alpha
  - beta
  - points
  - regions
  - xprime
properties:
  alpha:
    type: object
    propertyNames:
      pattern: "^[0-9]+$"
    additionalProperties:
      type: integer
      minimum: 0
  beta:
    type: object
    propertyNames:
      pattern: "^[0-9]+$"
    additionalProperties:
      type: integer
      minimum: 0
  points:
    type: object
    additionalProperties:
      type: string
  regions:
    type: object
    additionalProperties:
      type: string
  xprime:
    type: array
    items:
      type: string
"""
)

OPEN_BOOK_SCHEMA = yaml.safe_load(
    """
$schema: http://json-schema.org/draft-07/schema#
title: Partial open book v1
description: >-
  A partial open book with P made of 1-handles, one cocore arc per handle,
  and the image page given region by region in the orientation of S.
  Arcs and their images are listed from the bottom end to the top end.
type: object
additionalProperties: false
required:
  - handles
  - arcs
  - s_page
definitions:
  token:
    oneOf:
      - type: array
        minItems: 3
        maxItems: 3
        items:
          - const: corner
          - type: string
          - enum: [NE, NW, SW, SE]
      - type: array
        minItems: 4
        maxItems: 4
        items:
          - const: glue
          - enum: [bottom, top]
          - type: integer
            minimum: 0
          - enum: [L, M, R]
      - type: array
        minItems: 1
        maxItems: 1
        items:
          - const: suture
properties:
  handles:
    description: Number of 1-handles, attached in index order.
    type: integer
    minimum: 1
  arcs:
    type: array
    items:
      type: object
      additionalProperties: false
      required:
        - handle
      properties:
        handle:
          type: integer
          minimum: 0
  s_page:
    type: object
    additionalProperties: false
    required:
      - points
      - alpha
      - beta
      - regions
    properties:
      points:
        type: object
        additionalProperties:
          type: object
          additionalProperties: false
          required:
            - alpha
            - beta
            - quadrants
          properties:
            alpha:
              type: integer
              minimum: 0
            beta:
              type: integer
              minimum: 0
            quadrants:
              type: object
              additionalProperties: false
              required: [NE, NW, SW, SE]
              properties:
                NE:
                  type: string
                NW:
                  type: string
                SW:
                  type: string
                SE:
                  type: string
      alpha:
        type: array
        items:
          type: array
          items:
            type: string
      beta:
        type: array
        items:
          type: array
          items:
            type: string
      regions:
        type: array
        items:
          type: object
          additionalProperties: false
          required:
            - id
            - chi
            - boundary
          properties:
            id:
              type: string
            chi:
              type: integer
            boundary:
              type: array
              items:
                type: array
                items:
                  $ref: "#/definitions/token"
            basepoints:
              type: integer
              minimum: 0
              default: 0
"""
)
