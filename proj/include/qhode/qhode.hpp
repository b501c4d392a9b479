// qhode/qhode.hpp — umbrella header.
//
// Copyright (c) 2026 the qhode authors. Distributed under the MIT License.

#ifndef QHODE_QHODE_HPP
#define QHODE_QHODE_HPP

#include "qhode/analysis.hpp"
#include "qhode/balance.hpp"
#include "qhode/cli.hpp"
#include "qhode/elliptic.hpp"
#include "qhode/errors.hpp"
#include "qhode/integrability.hpp"
#include "qhode/kowalevski.hpp"
#include "qhode/laurent.hpp"
#include "qhode/linalg.hpp"
#include "qhode/majorant.hpp"
#include "qhode/numeric.hpp"
#include "qhode/parampoly.hpp"
#include "qhode/parser.hpp"
#include "qhode/poly.hpp"
#include "qhode/report.hpp"
#include "qhode/rng.hpp"
#include "qhode/scalar.hpp"
#include "qhode/system.hpp"
#include "qhode/weights.hpp"

#endif  // QHODE_QHODE_HPP
