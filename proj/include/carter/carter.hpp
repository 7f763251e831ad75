#pragma once

#include "carter/scalar.hpp"
#include "carter/root_system.hpp"
#include "carter/factorization.hpp"
#include "carter/canonical.hpp"
#include "carter/diagram.hpp"
#include "carter/families.hpp"
#include "carter/quiver.hpp"
#include "carter/presentation.hpp"
#include "carter/io.hpp"
