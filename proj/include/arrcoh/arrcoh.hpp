#ifndef ARRCOH_ARRCOH_HPP
#define ARRCOH_ARRCOH_HPP

#include "ratlin.hpp"
#include "arrangement.hpp"
#include "flats.hpp"
#include "ss_engine.hpp"
#include "mv_betti.hpp"

#endif
