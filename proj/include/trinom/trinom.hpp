#pragma once

#include "trinom/amoeba.hpp"
#include "trinom/errors.hpp"
#include "trinom/gamma.hpp"
#include "trinom/intlinalg.hpp"
#include "trinom/io.hpp"
#include "trinom/mellinbarnes.hpp"
#include "trinom/multi_index.hpp"
#include "trinom/oracle.hpp"
#include "trinom/puiseux.hpp"
#include "trinom/rational.hpp"
#include "trinom/systems.hpp"
#include "trinom/taylor.hpp"
#include "trinom/version.hpp"
