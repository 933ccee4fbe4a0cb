#pragma once

#include "subconj/error.hpp"
#include "subconj/word.hpp"
#include "subconj/substitution.hpp"
#include "subconj/letter_map.hpp"
#include "subconj/core.hpp"
#include "subconj/blocks.hpp"
#include "subconj/graphs.hpp"
#include "subconj/epimorph.hpp"
#include "subconj/verify.hpp"
#include "subconj/partitions.hpp"
#include "subconj/catalog.hpp"
#include "subconj/catalog_io.hpp"
#include "subconj/procedures.hpp"
