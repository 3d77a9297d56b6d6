#pragma once

// Umbrella header for the T-product Sylvester solver library.

#include "tsylv/bas.hpp"
#include "tsylv/bench.hpp"
#include "tsylv/block.hpp"
#include "tsylv/block_krylov.hpp"
#include "tsylv/errors.hpp"
#include "tsylv/global_krylov.hpp"
#include "tsylv/io.hpp"
#include "tsylv/linear_operator.hpp"
#include "tsylv/problems.hpp"
#include "tsylv/report.hpp"
#include "tsylv/rng.hpp"
#include "tsylv/spectral.hpp"
#include "tsylv/sylvester_direct.hpp"
#include "tsylv/t_schur.hpp"
#include "tsylv/tensor.hpp"
#include "tsylv/tproduct.hpp"
#include "tsylv/tubal_qr.hpp"
#include "tsylv/tube.hpp"
