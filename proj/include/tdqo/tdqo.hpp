#pragma once

#include "tdqo/chi.hpp"
#include "tdqo/fieldconv.hpp"
#include "tdqo/fourier.hpp"
#include "tdqo/grid.hpp"
#include "tdqo/opalgebra.hpp"
#include "tdqo/oracle.hpp"
#include "tdqo/packet.hpp"
#include "tdqo/singular.hpp"
#include "tdqo/special.hpp"
#include "tdqo/states.hpp"
#include "tdqo/version.hpp"
