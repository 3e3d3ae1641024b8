#pragma once

#include "torsion/integer.hpp"
#include "torsion/word.hpp"
#include "torsion/presentation.hpp"
#include "torsion/group_ring.hpp"
#include "torsion/families.hpp"
#include "torsion/finite_action.hpp"
#include "torsion/chains.hpp"
#include "torsion/transversal.hpp"
#include "torsion/int_matrix.hpp"
#include "torsion/snf.hpp"
#include "torsion/chain_complex.hpp"
#include "torsion/homology.hpp"
#include "torsion/reidemeister_schreier.hpp"
#include "torsion/counterexample.hpp"
#include "torsion/experiment.hpp"
