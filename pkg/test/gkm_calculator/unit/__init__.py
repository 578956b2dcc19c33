# Copyright GKM Calculator contributors. All Rights Reserved.
