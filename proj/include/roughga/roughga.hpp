#pragma once

#include "roughga/cleaning.hpp"
#include "roughga/discretizer.hpp"
#include "roughga/error.hpp"
#include "roughga/evolver.hpp"
#include "roughga/pipeline.hpp"
#include "roughga/rough.hpp"
#include "roughga/rules.hpp"
#include "roughga/schema.hpp"
#include "roughga/synth.hpp"
#include "roughga/table.hpp"
