#pragma once

// Umbrella header for the numerical core (no JSON/CLI dependencies).

#include <chemolv/diagnostics.hpp>
#include <chemolv/elliptic.hpp>
#include <chemolv/hypotheses.hpp>
#include <chemolv/model.hpp>
#include <chemolv/ode_bounds.hpp>
#include <chemolv/pde_stepper.hpp>
#include <chemolv/steady_states.hpp>
