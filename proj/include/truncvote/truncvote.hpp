#ifndef TRUNCVOTE_TRUNCVOTE_HPP
#define TRUNCVOTE_TRUNCVOTE_HPP

// Everything except the command-line layer, which needs the vendored CLI11 and JSON headers.

#include "classify.hpp"
#include "core.hpp"
#include "errors.hpp"
#include "manipulation.hpp"
#include "rational.hpp"
#include "reductions.hpp"
#include "rules.hpp"
#include "sampling.hpp"
#include "text_format.hpp"
#include "uncertainty.hpp"

#endif // TRUNCVOTE_TRUNCVOTE_HPP
