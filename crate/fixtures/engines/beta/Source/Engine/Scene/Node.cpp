#include "Node.h"
#include "../Physics/RigidBody.h"

// Node
