#include "safesched/rng.hpp"
