#pragma once

#include "force/canonical.hpp"
#include "force/entailment.hpp"
#include "force/error.hpp"
#include "force/evaluate.hpp"
#include "force/formula.hpp"
#include "force/io/clause_filter.hpp"
#include "force/io/config.hpp"
#include "force/io/formula_text.hpp"
#include "force/io/traces.hpp"
#include "force/oracle.hpp"
#include "force/protocols.hpp"
#include "force/pruning_store.hpp"
#include "force/search_space.hpp"
#include "force/search_spec.hpp"
#include "force/signature.hpp"
#include "force/slicing.hpp"
#include "force/structure.hpp"
#include "force/synthesis.hpp"
