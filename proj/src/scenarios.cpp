#include "scenarios.hpp"
