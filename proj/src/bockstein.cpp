#include "bockstein.hpp"
