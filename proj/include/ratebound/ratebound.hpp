#pragma once

#include "ratebound/rational.hpp"
#include "ratebound/joint_table.hpp"
#include "ratebound/measures.hpp"
#include "ratebound/directed_info.hpp"
#include "ratebound/deterministic_map.hpp"
#include "ratebound/network.hpp"
#include "ratebound/system_model.hpp"
#include "ratebound/random_systems.hpp"
#include "ratebound/prefix_code.hpp"
#include "ratebound/rate.hpp"
#include "ratebound/verifier.hpp"
#include "ratebound/sweep.hpp"
#include "ratebound/system_file.hpp"
#include "ratebound/report.hpp"
