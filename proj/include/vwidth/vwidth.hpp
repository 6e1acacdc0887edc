#pragma once

#include "vwidth/error.hpp"
#include "vwidth/field.hpp"
#include "vwidth/trimat.hpp"
#include "vwidth/words.hpp"
#include "vwidth/powerwidth.hpp"
#include "vwidth/commwidth.hpp"
#include "vwidth/oracle.hpp"
#include "vwidth/json_io.hpp"
