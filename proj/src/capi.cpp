#include "cobarext.h"
