#pragma once

/// Convenience header pulling in the whole library.

#include "bowtie/analysis.hpp"
#include "bowtie/consequence.hpp"
#include "bowtie/dot.hpp"
#include "bowtie/dsl.hpp"
#include "bowtie/error.hpp"
#include "bowtie/io.hpp"
#include "bowtie/joins.hpp"
#include "bowtie/prevention.hpp"
#include "bowtie/tree.hpp"
