#pragma once

#include "bsb/bits.hpp"
#include "bsb/circuit.hpp"
#include "bsb/commands.hpp"
#include "bsb/errors.hpp"
#include "bsb/jones.hpp"
#include "bsb/json_io.hpp"
#include "bsb/pooling.hpp"
#include "bsb/spring_balance.hpp"
#include "bsb/statevector.hpp"
